//! Dense matrices over the coefficient ring and matrix Laurent polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_rational::BigRational;

use crate::coeff::Coeff;
use crate::series::TruncSeries;

use super::OracleError;

/// A dense `rows × cols` matrix of coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Coeff>,
}

impl CoeffMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CoeffMatrix { rows, cols, data: vec![Coeff::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Coeff::one());
        }
        m
    }

    pub fn diagonal(entries: Vec<Coeff>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, c) in entries.into_iter().enumerate() {
            m.set(i, i, c);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Coeff) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CoeffMatrix { rows, cols, data }
    }

    pub fn column(v: &[Coeff]) -> Self {
        Self::from_fn(v.len(), 1, |i, _| v[i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Coeff {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: Coeff) {
        self.data[i * self.cols + j] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Coeff::is_zero)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        CoeffMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    /// `self - c·I`.
    pub fn sub_scalar(&self, c: &Coeff) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let v = m.get(i, i) - c;
            m.set(i, i, v);
        }
        m
    }

    pub fn mul_vec(&self, v: &[Coeff]) -> Vec<Coeff> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Coeff::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Coeff]) -> Vec<Coeff> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                let mut acc = Coeff::zero();
                for (i, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(x * a);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> Coeff {
        let mut acc = Coeff::zero();
        for i in 0..self.rows.min(self.cols) {
            acc += self.get(i, i);
        }
        acc
    }

    /// Reduced row echelon form; returns the pivot columns.
    fn rref(&mut self) -> Result<Vec<usize>, OracleError> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let mut found = None;
            let mut saw_nonzero = false;
            for r in row..self.rows {
                let v = self.get(r, col);
                if v.is_zero() {
                    continue;
                }
                saw_nonzero = true;
                if let Ok(inv) = v.inv() {
                    found = Some((r, inv));
                    break;
                }
            }
            let Some((p, inv)) = found else {
                if saw_nonzero {
                    return Err(OracleError::NonUnitPivot);
                }
                continue;
            };
            for j in 0..self.cols {
                self.data.swap(row * self.cols + j, p * self.cols + j);
            }
            for j in 0..self.cols {
                let v = self.get(row, j) * &inv;
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let f = self.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    let v = self.get(r, j) - &(&f * self.get(row, j));
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Ok(pivots)
    }

    /// A basis of `{v : self·v = 0}`.
    pub fn nullspace(&self) -> Result<Vec<Vec<Coeff>>, OracleError> {
        let mut m = self.clone();
        let pivots = m.rref()?;
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Coeff::zero(); self.cols];
            v[free] = Coeff::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.get(r, free);
            }
            basis.push(v);
        }
        Ok(basis)
    }

    pub fn inverse(&self) -> Result<Option<CoeffMatrix>, OracleError> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = CoeffMatrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                Coeff::one()
            } else {
                Coeff::zero()
            }
        });
        let pivots = aug.rref()?;
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Ok(None);
        }
        Ok(Some(CoeffMatrix::from_fn(n, n, |i, j| aug.get(i, j + n).clone())))
    }

    /// Characteristic polynomial `det(λ - M)`, lowest degree first.
    pub fn char_poly(&self) -> Vec<Coeff> {
        let single = SeriesMatrix::constant(self.clone());
        single.char_poly().into_iter().map(|p| p.get(&0).cloned().unwrap_or_default()).collect()
    }
}

impl Add for &CoeffMatrix {
    type Output = CoeffMatrix;
    fn add(self, rhs: &CoeffMatrix) -> CoeffMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CoeffMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CoeffMatrix {
    type Output = CoeffMatrix;
    fn sub(self, rhs: &CoeffMatrix) -> CoeffMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CoeffMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &CoeffMatrix {
    type Output = CoeffMatrix;
    fn mul(self, rhs: &CoeffMatrix) -> CoeffMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = CoeffMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for CoeffMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// An exact Laurent polynomial with coefficients in the ring, keyed by exponent.
pub type LaurentPoly = BTreeMap<i64, Coeff>;

/// A square matrix whose entries are Laurent polynomials in one variable,
/// stored as `Σ_i X^i·M_i`. All arithmetic is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesMatrix {
    n: usize,
    terms: BTreeMap<i64, CoeffMatrix>,
}

impl SeriesMatrix {
    pub fn zero(n: usize) -> Self {
        SeriesMatrix { n, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(CoeffMatrix::identity(n))
    }

    pub fn constant(m: CoeffMatrix) -> Self {
        Self::monomial(0, m)
    }

    /// `X^exp · m`.
    pub fn monomial(exp: i64, m: CoeffMatrix) -> Self {
        assert_eq!(m.rows(), m.cols());
        let mut s = SeriesMatrix { n: m.rows(), terms: BTreeMap::new() };
        if !m.is_zero() {
            s.terms.insert(exp, m);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Adds `c·X^exp` at entry `(i, j)`.
    pub fn add_entry(&mut self, i: usize, j: usize, exp: i64, c: &Coeff) {
        if c.is_zero() {
            return;
        }
        let n = self.n;
        let m = self.terms.entry(exp).or_insert_with(|| CoeffMatrix::zeros(n, n));
        let v = m.get(i, j) + c;
        m.set(i, j, v);
        if m.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// Coefficient matrix of `X^exp`.
    pub fn coeff_matrix(&self, exp: i64) -> CoeffMatrix {
        self.terms.get(&exp).cloned().unwrap_or_else(|| CoeffMatrix::zeros(self.n, self.n))
    }

    pub fn low(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn high(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Entry `(i, j)` as a truncated series known modulo `X^prec`.
    pub fn entry(&self, i: usize, j: usize, prec: i64) -> TruncSeries {
        TruncSeries::from_terms(1, self.terms.iter().map(|(e, m)| (*e, m.get(i, j).clone())), prec)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = Self::zero(self.n);
        for (e, m) in &self.terms {
            let v = m.scale(c);
            if !v.is_zero() {
                out.terms.insert(*e, v);
            }
        }
        out
    }

    /// Multiplies by `X^k`.
    pub fn shift(&self, k: i64) -> Self {
        SeriesMatrix { n: self.n, terms: self.terms.iter().map(|(e, m)| (e + k, m.clone())).collect() }
    }

    /// Drops all terms of exponent `>= prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        SeriesMatrix { n: self.n, terms: self.terms.range(..prec).map(|(e, m)| (*e, m.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.n);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn trace(&self) -> LaurentPoly {
        self.terms.iter().map(|(e, m)| (*e, m.trace())).filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Characteristic polynomial `det(λ - M)` by the Faddeev–LeVerrier
    /// recursion; entry `k` is the coefficient of `λ^k`.
    pub fn char_poly(&self) -> Vec<LaurentPoly> {
        let n = self.n;
        let mut coeffs: Vec<LaurentPoly> = vec![LaurentPoly::new(); n + 1];
        coeffs[n].insert(0, Coeff::one());
        let mut m = Self::zero(n);
        for k in 1..=n {
            // M_k = A·M_{k-1} + c_{n-k+1}·I,  c_{n-k} = -tr(A·M_k)/k
            let prev = coeffs[n - k + 1].clone();
            let mut next = self * &m;
            for (e, c) in &prev {
                next = &next + &SeriesMatrix::monomial(*e, CoeffMatrix::identity(n).scale(c));
            }
            m = next;
            let tr = (self * &m).trace();
            let factor = Coeff::from(BigRational::new((-1).into(), (k as i64).into()));
            coeffs[n - k] = tr.into_iter().map(|(e, c)| (e, &c * &factor)).collect();
        }
        coeffs
    }
}

impl Add for &SeriesMatrix {
    type Output = SeriesMatrix;
    fn add(self, rhs: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (e, m) in &rhs.terms {
            let sum = match out.terms.get(e) {
                Some(x) => x + m,
                None => m.clone(),
            };
            if sum.is_zero() {
                out.terms.remove(e);
            } else {
                out.terms.insert(*e, sum);
            }
        }
        out
    }
}

impl Sub for &SeriesMatrix {
    type Output = SeriesMatrix;
    fn sub(self, rhs: &SeriesMatrix) -> SeriesMatrix {
        self + &rhs.scale(&Coeff::from_int(-1))
    }
}

impl Mul for &SeriesMatrix {
    type Output = SeriesMatrix;
    fn mul(self, rhs: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!(self.n, rhs.n);
        let mut out = SeriesMatrix::zero(self.n);
        for (e1, m1) in &self.terms {
            for (e2, m2) in &rhs.terms {
                let prod = m1 * m2;
                if prod.is_zero() {
                    continue;
                }
                out = &out + &SeriesMatrix::monomial(e1 + e2, prod);
            }
        }
        out
    }
}

/// Exact Laurent polynomial from `(exponent, coefficient)` pairs.
pub fn laurent(terms: impl IntoIterator<Item = (i64, Coeff)>) -> LaurentPoly {
    let mut p = LaurentPoly::new();
    for (e, c) in terms {
        let v = p.get(&e).cloned().unwrap_or_default() + &c;
        if v.is_zero() {
            p.remove(&e);
        } else {
            p.insert(e, v);
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> CoeffMatrix {
        CoeffMatrix::from_fn(rows.len(), rows[0].len(), |i, j| Coeff::from_int(rows[i][j]))
    }

    #[test]
    fn nullspace_and_inverse() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let ns = a.nullspace().unwrap();
        assert_eq!(ns.len(), 1);
        assert!(a.mul_vec(&ns[0]).iter().all(Coeff::is_zero));
        assert_eq!(a.inverse().unwrap(), None);
        let b = m(&[&[2, 1], &[1, 1]]);
        let inv = b.inverse().unwrap().unwrap();
        assert_eq!(&b * &inv, CoeffMatrix::identity(2));
    }

    #[test]
    fn char_poly_of_companion() {
        // [[0,1],[2,0]] has char λ^2 - 2
        let c = m(&[&[0, 1], &[2, 0]]);
        assert_eq!(c.char_poly(), vec![Coeff::from_int(-2), Coeff::zero(), Coeff::one()]);
        let mut g = SeriesMatrix::zero(2);
        g.add_entry(0, 1, 0, &Coeff::one());
        g.add_entry(0, 0, 1, &Coeff::from_int(3));
        g.add_entry(1, 0, 0, &Coeff::from_int(5));
        // λ^2 - 3Xλ - 5
        let cp = g.char_poly();
        assert_eq!(cp[0], laurent([(0, Coeff::from_int(-5))]));
        assert_eq!(cp[1], laurent([(1, Coeff::from_int(-3))]));
        assert_eq!(cp[2], laurent([(0, Coeff::one())]));
    }

    #[test]
    fn laurent_matrix_products() {
        let mut lam = SeriesMatrix::zero(2);
        lam.add_entry(0, 0, 1, &Coeff::one());
        lam.add_entry(1, 1, 2, &Coeff::one());
        let mut inv = SeriesMatrix::zero(2);
        inv.add_entry(0, 0, -1, &Coeff::one());
        inv.add_entry(1, 1, -2, &Coeff::one());
        assert_eq!(&lam * &inv, SeriesMatrix::identity(2));
        assert_eq!(lam.pow(2).coeff_matrix(4), m(&[&[0, 0], &[0, 1]]));
    }
}
