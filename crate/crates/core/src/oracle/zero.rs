//! Matrix model of the transform from zero to infinity.
//!
//! For `E = [r]_*[-r·Σ a_i T^{i-s}]` the transform is described by the
//! `(r+s) × (r+s)` matrix `M = Σ_i A_i Z'^i` coming from the operator rules,
//! which equals `Γ^r` for the companion-type matrix `Γ` with characteristic
//! polynomial `λ^{r+s} - Σ a_i Z'^i λ^i`.

use num_rational::BigRational;
use num_integer::Integer;

use crate::coeff::{Coeff, CoeffRing};

use super::matrix::{CoeffMatrix, SeriesMatrix};
use super::{IdentityCheck, OracleError};

/// `Γ` for `a_0, …, a_{k}` with `k < r + s`: ones on the superdiagonal and
/// `a_i Z'^i` in the first column, row `r + s - i` (counting from 1).
pub fn build_gamma(r: u32, s: u32, a: &[Coeff]) -> SeriesMatrix {
    let n = (r + s) as usize;
    assert!(a.len() <= n, "companion matrix holds at most r + s coefficients");
    let mut g = SeriesMatrix::zero(n);
    for i in 0..n - 1 {
        g.add_entry(i, i + 1, 0, &Coeff::one());
    }
    for (i, c) in a.iter().enumerate() {
        g.add_entry(n - 1 - i, 0, i as i64, c);
    }
    g
}

/// The operator-rule matrix `M = Σ A_i Z'^i` built from `a_0, …, a_s`:
/// column `i ≤ r` holds `a_j Z'^j` in row `i + s - j`, and column `r + k`
/// has a single `1` in row `k`.
pub fn operator_matrix(r: u32, s: u32, a: &[Coeff]) -> SeriesMatrix {
    let (r, s) = (r as usize, s as usize);
    let n = r + s;
    let mut m = SeriesMatrix::zero(n);
    for i in 1..=r {
        for j in 0..=s {
            if let Some(c) = a.get(j) {
                m.add_entry(i + s - j - 1, i - 1, j as i64, c);
            }
        }
    }
    for k in 1..=s {
        m.add_entry(k - 1, r + k - 1, 0, &Coeff::one());
    }
    m
}

/// `B = diag((r-1)/r, …, 1/r, 0, …, 0) + diag(1, …, r+s)/(r+s)`.
pub fn shift_matrix(r: u32, s: u32) -> CoeffMatrix {
    let (r, n) = (r as i64, (r + s) as i64);
    CoeffMatrix::diagonal(
        (1..=n)
            .map(|i| {
                let head = if i <= r { Coeff::ratio(r - i, r) } else { Coeff::zero() };
                &head + &Coeff::ratio(i, n)
            })
            .collect(),
    )
}

/// The constant `(2r + s)/(2r + 2s)` subtracted from `b_s` in the shift system.
pub fn shift_constant(r: u32, s: u32) -> Coeff {
    Coeff::ratio(2 * r as i64 + s as i64, 2 * (r + s) as i64)
}

/// Whether `Σ_{i≤k} (N_i - α_i)·v_{k-i} = 0` for `k = 0..=s` has a solution
/// with `v_0 ≠ 0`. The caller passes `N_s` already adjusted.
pub fn shift_system_solvable(mats: &[CoeffMatrix], alphas: &[Coeff]) -> Result<bool, OracleError> {
    assert_eq!(mats.len(), alphas.len());
    let levels = mats.len();
    let n = mats[0].rows();
    let mut big = CoeffMatrix::zeros(n * levels, n * levels);
    for k in 0..levels {
        for j in 0..=k {
            let block = mats[k - j].sub_scalar(&alphas[k - j]);
            for r in 0..n {
                for c in 0..n {
                    big.set(k * n + r, j * n + c, block.get(r, c).clone());
                }
            }
        }
    }
    Ok(big.nullspace()?.iter().any(|v| v[..n].iter().any(|c| !c.is_zero())))
}

/// The system for `F^(0,∞)`: `N_i = A_i` for `i < s` and `N_s = A_s - B`.
pub fn zero_to_inf_system(r: u32, s: u32, a: &[Coeff], alphas: &[Coeff]) -> Result<bool, OracleError> {
    let m = operator_matrix(r, s, a);
    let mut mats: Vec<CoeffMatrix> = (0..=s as i64).map(|i| m.coeff_matrix(i)).collect();
    let last = mats.pop().expect("s + 1 matrices");
    mats.push(&last - &shift_matrix(r, s));
    shift_system_solvable(&mats, alphas)
}

/// Checks the eigenvector identities behind the shift system at zero.
///
/// Works over `Q(ζ_{r+s})[ρ]/(ρ^{r+s} - a_0)`, with `μ` a primitive
/// `(r+s)`-th root of unity: `e_j = (μ^{ij} ρ^i)_i`, `ε_j = (μ^{-ij} ρ^{-i})_i`.
/// They are dual up to the factor `r + s`, are eigenvectors of `A_0` for
/// `μ^{rj} ρ^r`, and `ε_k (B - (2r+s)/(2r+2s)) e_l = 0` whenever
/// `(r + s) | (l - k)·gcd(r, s)`.
pub fn shift_identity_zero_to_inf(r: u32, s: u32, a0: &BigRational) -> Result<Vec<IdentityCheck>, OracleError> {
    let n = r + s;
    let ring = CoeffRing::extension(n, n, a0.clone()).map_err(|e| OracleError::Ring(e.to_string()))?;
    let mu = ring.root_of_unity(n).ok_or(OracleError::Ring(format!("no primitive {n}-th root of unity")))?;
    let rho = ring.radical_generator().ok_or(OracleError::Ring("missing radical".into()))?;
    let a = {
        let mut a = vec![Coeff::zero(); s as usize + 1];
        a[0] = Coeff::from(a0.clone());
        a
    };
    let a_0 = operator_matrix(r, s, &a).coeff_matrix(0);
    let b = shift_matrix(r, s).sub_scalar(&shift_constant(r, s));
    let (e, eps) = dual_vectors(n as usize, n as usize, 0, &mu, &rho)?;
    let mut checks = Vec::new();
    checks.push(dual_check(&e, &eps, n));

    let mut eig = IdentityCheck::pass("eigenvectors");
    for j in 0..n as usize {
        let lam = &mu.pow((r as usize * (j + 1)) as u32) * &rho.pow(r);
        let right: Vec<Coeff> = e[j].iter().map(|x| x * &lam).collect();
        if a_0.mul_vec(&e[j]) != right {
            eig = IdentityCheck::fail_at("eigenvectors", j, &right[0], &a_0.mul_vec(&e[j])[0]);
            break;
        }
        let left: Vec<Coeff> = eps[j].iter().map(|x| x * &lam).collect();
        if a_0.vec_mul(&eps[j]) != left {
            eig = IdentityCheck::fail_at("eigenvectors", j, &left[0], &a_0.vec_mul(&eps[j])[0]);
            break;
        }
    }
    checks.push(eig);
    checks.push(vanishing_check(&b, &e, &eps, n, r.gcd(&s)));
    Ok(checks)
}

/// `e_j[i] = μ^{ij}ρ^i` for `i > skip` (zero otherwise) and
/// `ε_j[i] = μ^{-ij}ρ^{-i}`, for `j = 1..=count` and `i = 1..=len`.
pub(crate) fn dual_vectors(count: usize, len: usize, skip: usize, mu: &Coeff, rho: &Coeff) -> Result<(Vec<Vec<Coeff>>, Vec<Vec<Coeff>>), OracleError> {
    let rho_inv = rho.inv().map_err(|e| OracleError::Ring(e.to_string()))?;
    let mu_inv = mu.inv().map_err(|e| OracleError::Ring(e.to_string()))?;
    let mut e = Vec::with_capacity(count);
    let mut eps = Vec::with_capacity(count);
    for j in 1..=count {
        let ej = (1..=len)
            .map(|i| if i <= skip { Coeff::zero() } else { &mu.pow((i * j) as u32) * &rho.pow(i as u32) })
            .collect();
        let epsj = (1..=len).map(|i| &mu_inv.pow((i * j) as u32) * &rho_inv.pow(i as u32)).collect();
        e.push(ej);
        eps.push(epsj);
    }
    Ok((e, eps))
}

fn dot(x: &[Coeff], y: &[Coeff]) -> Coeff {
    let mut acc = Coeff::zero();
    for (a, b) in x.iter().zip(y) {
        acc += &(a * b);
    }
    acc
}

/// `ε_i · e_j = m·δ_ij`.
pub(crate) fn dual_check(e: &[Vec<Coeff>], eps: &[Vec<Coeff>], m: u32) -> IdentityCheck {
    for i in 0..e.len() {
        for j in 0..e.len() {
            let expected = if i == j { Coeff::from_int(m as i64) } else { Coeff::zero() };
            let found = dot(&eps[i], &e[j]);
            if found != expected {
                return IdentityCheck::fail_at("dual_basis", i * e.len() + j, &expected, &found);
            }
        }
    }
    IdentityCheck::pass("dual_basis")
}

/// `ε_k·S·e_l = 0` for every pair with `m | (l - k)·d`.
pub(crate) fn vanishing_check(shift: &CoeffMatrix, e: &[Vec<Coeff>], eps: &[Vec<Coeff>], m: u32, d: u32) -> IdentityCheck {
    let len = e.len() as i64;
    let mut pairs = 0;
    for k in 0..len {
        for l in 0..len {
            if ((l - k) * d as i64).rem_euclid(m as i64) != 0 {
                continue;
            }
            pairs += 1;
            let found = dot(&eps[k as usize], &shift.mul_vec(&e[l as usize]));
            if !found.is_zero() {
                return IdentityCheck::fail_at("shift_vanishing", (k * len + l) as usize, &Coeff::zero(), &found);
            }
        }
    }
    IdentityCheck::pass("shift_vanishing").with_note(format!("{pairs} congruent pairs"))
}
