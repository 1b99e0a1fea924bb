//! Matrix models of the transforms from infinity.
//!
//! `F^(∞,0)` uses an `r × r` companion matrix with characteristic polynomial
//! `λ^r + Σ a_i T'^i λ^{s-i}`. `F^(∞,∞)` uses the `s × s` matrix `A` of the
//! operator rules, conjugated by `Λ = diag(Z', …, Z'^s)`.

use num_integer::Integer;
use num_rational::BigRational;

use crate::coeff::{Coeff, CoeffRing};

use super::matrix::{CoeffMatrix, SeriesMatrix};
use super::zero::{dual_check, dual_vectors, vanishing_check};
use super::{IdentityCheck, OracleError};

/// Companion matrix for `F^(∞,0)`: ones on the superdiagonal and
/// `-a_i T'^i` in the first column, row `r - s + i` (counting from 1).
pub fn build_inf_zero_companion(r: u32, s: u32, a: &[Coeff]) -> SeriesMatrix {
    assert!(r > s && a.len() <= s as usize + 1);
    let (n, s) = (r as usize, s as usize);
    let mut g = SeriesMatrix::zero(n);
    for i in 0..n - 1 {
        g.add_entry(i, i + 1, 0, &Coeff::one());
    }
    for (i, c) in a.iter().enumerate() {
        g.add_entry(n - s + i - 1, 0, i as i64, &-c);
    }
    g
}

/// The matrices of the `F^(∞,∞)` model for `r < s`.
#[derive(Debug, Clone)]
pub struct InfMatrices {
    pub r: u32,
    pub s: u32,
    /// `A`, with the entry `-1/(a_0 z')` written as `-(1/a_0)·Z'^{r-s}`.
    pub a: SeriesMatrix,
    /// `B_1, …, B_r`.
    pub b: Vec<CoeffMatrix>,
    /// `D = Z'·Λ^{-1}·A·Λ`.
    pub d: SeriesMatrix,
    /// `Σ Z'^i C_i = Π_i Z'Λ^{-1}(A + B_i)Λ - (Z'^s/(s-r))·diag(1, …, s)`.
    pub c: SeriesMatrix,
    /// `Σ Z'^i C'_i = D^r`.
    pub c_prime: SeriesMatrix,
    /// `P`: `-(r+i)/(r·a_0)` at `(i, i+s-r)` for `i = 1..=r`. Equals
    /// [`product_defect`] when `s ≥ 2r`.
    pub p: CoeffMatrix,
}

impl InfMatrices {
    /// Expected value of `C'_s - C_s` for `s ≥ 2r`: `diag(i/(s-r)) - P`.
    pub fn expected_defect(&self) -> CoeffMatrix {
        let m = (self.s - self.r) as i64;
        let diag = CoeffMatrix::diagonal((1..=self.s as i64).map(|i| Coeff::ratio(i, m)).collect());
        &diag - &self.p
    }
}

/// Builds the `F^(∞,∞)` matrices from `a_0, …, a_s`.
pub fn build_inf_matrices(r: u32, s: u32, a: &[Coeff]) -> Result<InfMatrices, OracleError> {
    assert!(r < s);
    let inv_a0 = a[0].inv().map_err(|e| OracleError::Ring(e.to_string()))?;
    let (ru, su) = (r as usize, s as usize);
    let coeff = |i: usize| a.get(i).cloned().unwrap_or_default();

    let mut am = SeriesMatrix::zero(su);
    for k in 1..su {
        am.add_entry(k, k - 1, 0, &Coeff::one());
    }
    for k in 1..=su {
        am.add_entry(k - 1, su - 1, 0, &-(&coeff(su + 1 - k) * &inv_a0));
    }
    am.add_entry(ru, su - 1, r as i64 - s as i64, &-&inv_a0);

    let b: Vec<CoeffMatrix> = (1..=r as i64)
        .map(|i| {
            let mut m = CoeffMatrix::zeros(su, su);
            m.set(0, su - 1, -(&Coeff::ratio(r as i64 + i, r as i64) * &inv_a0));
            m
        })
        .collect();

    let mut lam = SeriesMatrix::zero(su);
    let mut lam_inv = SeriesMatrix::zero(su);
    for i in 0..su {
        lam.add_entry(i, i, i as i64 + 1, &Coeff::one());
        lam_inv.add_entry(i, i, -(i as i64) - 1, &Coeff::one());
    }
    let conj = |m: &SeriesMatrix| (&(&lam_inv * m) * &lam).shift(1);

    let d = conj(&am);
    let mut prod = SeriesMatrix::identity(su);
    for bi in &b {
        prod = &prod * &conj(&(&am + &SeriesMatrix::constant(bi.clone())));
    }
    let diag = CoeffMatrix::diagonal((1..=s as i64).map(|i| Coeff::ratio(i, (s - r) as i64)).collect());
    let c = &prod - &SeriesMatrix::monomial(s as i64, diag);
    let c_prime = d.pow(r);

    let mut p = CoeffMatrix::zeros(su, su);
    for i in 1..=ru {
        p.set(i - 1, i + su - ru - 1, -(&Coeff::ratio((r + i as u32) as i64, r as i64) * &inv_a0));
    }
    Ok(InfMatrices { r, s, a: am, b, d, c, c_prime, p })
}

/// The system for `F^(∞,∞)` with `s ≥ 2r`: `N_i = C_i` for `i ≤ s`.
pub fn inf_to_inf_system(m: &InfMatrices, alphas: &[Coeff]) -> Result<bool, OracleError> {
    let mats: Vec<CoeffMatrix> = (0..=m.s as i64).map(|i| m.c.coeff_matrix(i)).collect();
    super::zero::shift_system_solvable(&mats, alphas)
}

/// The constant `(s - 2r)/(2s - 2r)` subtracted from `b_s` in the shift system.
pub fn inf_shift_constant(r: u32, s: u32) -> Coeff {
    Coeff::ratio(s as i64 - 2 * r as i64, 2 * (s - r) as i64)
}

/// `Σ_i D_0^{i-1}·B_i·D_0^{r-i}`, the `Z'^s` part of the product of the
/// conjugated factors beyond `D^r`.
pub fn product_defect(m: &InfMatrices) -> CoeffMatrix {
    let d0 = m.d.coeff_matrix(0);
    let su = m.s as usize;
    let mut total = CoeffMatrix::zeros(su, su);
    for (i, bi) in m.b.iter().enumerate() {
        let left = SeriesMatrix::constant(d0.clone()).pow(i as u32).coeff_matrix(0);
        let right = SeriesMatrix::constant(d0.clone()).pow(m.r - 1 - i as u32).coeff_matrix(0);
        total = &total + &(&(&left * bi) * &right);
    }
    total
}

/// Checks the conjugation identities: `C_i = C'_i` for `i < s`,
/// `C'_s - C_s = diag(i/(s-r)) - Σ_i D_0^{i-1} B_i D_0^{r-i}`, and for
/// `s ≥ 2r` that the last sum is the sparse matrix `P`.
pub fn conjugation_checks(m: &InfMatrices) -> IdentityCheck {
    for i in 0..m.s as i64 {
        let (c, cp) = (m.c.coeff_matrix(i), m.c_prime.coeff_matrix(i));
        if c != cp {
            let idx = first_difference(&c, &cp);
            return IdentityCheck::fail_at("conjugation", i as usize, c_entry(&cp, idx), c_entry(&c, idx))
                .with_note(format!("C_{i} differs from C'_{i}"));
        }
    }
    let s = m.s as i64;
    let defect = &m.c_prime.coeff_matrix(s) - &m.c.coeff_matrix(s);
    let sum = product_defect(m);
    let diag = CoeffMatrix::diagonal((1..=s).map(|i| Coeff::ratio(i, s - m.r as i64)).collect());
    let expected = &diag - &sum;
    if defect != expected {
        let idx = first_difference(&defect, &expected);
        return IdentityCheck::fail_at("conjugation", s as usize, c_entry(&expected, idx), c_entry(&defect, idx))
            .with_note(format!("C'_s - C_s differs at entry {idx:?}"));
    }
    if m.s >= 2 * m.r && sum != m.p {
        let idx = first_difference(&sum, &m.p);
        return IdentityCheck::fail_at("conjugation", s as usize, c_entry(&m.p, idx), c_entry(&sum, idx))
            .with_note(format!("defect differs from the sparse form at entry {idx:?}"));
    }
    IdentityCheck::pass("conjugation")
}

fn first_difference(x: &CoeffMatrix, y: &CoeffMatrix) -> (usize, usize) {
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            if x.get(i, j) != y.get(i, j) {
                return (i, j);
            }
        }
    }
    (0, 0)
}

fn c_entry(m: &CoeffMatrix, (i, j): (usize, usize)) -> &Coeff {
    m.get(i, j)
}

/// Checks the eigenvector identities behind the shift system at infinity
/// (`s ≥ 2r`).
///
/// Works over `Q(ζ_{s-r})[ρ]/(ρ^{s-r} + a_0)` with `η` a primitive
/// `(s-r)`-th root of unity: `e'_j` vanishes in its first `r` entries and
/// has `η^{ij}ρ^i` for `i > r`, `ε'_j = (η^{-ij}ρ^{-i})_i`. They are dual up
/// to `s - r`, are eigenvectors of `C_0` for `η^{-rj}ρ^{-r}`, and
/// `ε'_k (C'_s - C_s - (s-2r)/(2s-2r)) e'_l = 0` whenever
/// `(s - r) | (l - k)·gcd(r, s)`.
pub fn shift_identity_inf_to_inf(r: u32, s: u32, a0: &BigRational) -> Result<Vec<IdentityCheck>, OracleError> {
    if s < 2 * r {
        return Err(OracleError::Ring(format!("shift identities need s >= 2r, got r = {r}, s = {s}")));
    }
    let m = s - r;
    let target = -a0.clone();
    let (eta, rho) = if m == 1 {
        (Coeff::one(), Coeff::from(target))
    } else {
        let ring = CoeffRing::extension(m, m, target).map_err(|e| OracleError::Ring(e.to_string()))?;
        let eta = ring.root_of_unity(m).ok_or(OracleError::Ring(format!("no primitive {m}-th root of unity")))?;
        let rho = ring.radical_generator().ok_or(OracleError::Ring("missing radical".into()))?;
        (eta, rho)
    };
    let mut a = vec![Coeff::zero(); s as usize + 1];
    a[0] = Coeff::from(a0.clone());
    let mats = build_inf_matrices(r, s, &a)?;
    let c0 = mats.c.coeff_matrix(0);
    let shift = (&mats.c_prime.coeff_matrix(s as i64) - &mats.c.coeff_matrix(s as i64)).sub_scalar(&inf_shift_constant(r, s));
    let (e, eps) = dual_vectors(m as usize, s as usize, r as usize, &eta, &rho)?;

    let mut checks = vec![dual_check(&e, &eps, m)];
    let eta_inv = eta.inv().map_err(|e| OracleError::Ring(e.to_string()))?;
    let rho_inv_r = rho.inv().map_err(|e| OracleError::Ring(e.to_string()))?.pow(r);
    let mut eig = IdentityCheck::pass("eigenvectors");
    for j in 0..m as usize {
        let lam = &eta_inv.pow(r * (j as u32 + 1)) * &rho_inv_r;
        let right: Vec<Coeff> = e[j].iter().map(|x| x * &lam).collect();
        let found = c0.mul_vec(&e[j]);
        if found != right {
            eig = IdentityCheck::fail_at("eigenvectors", j, &right[s as usize - 1], &found[s as usize - 1]);
            break;
        }
        let left: Vec<Coeff> = eps[j].iter().map(|x| x * &lam).collect();
        let found = c0.vec_mul(&eps[j]);
        if found != left {
            eig = IdentityCheck::fail_at("eigenvectors", j, &left[0], &found[0]).with_note("left eigenvector");
            break;
        }
    }
    checks.push(eig);
    checks.push(vanishing_check(&shift, &e, &eps, m, r.gcd(&s)));
    Ok(checks)
}
