//! Lifting a simple eigenvalue of a matrix power series.

use crate::coeff::Coeff;
use crate::series::TruncSeries;

use super::matrix::{CoeffMatrix, SeriesMatrix};
use super::OracleError;

/// An eigenvalue `α(X) = Σ α_k X^k` of `D(X)` together with an eigenvector
/// `u(X) = Σ u_k X^k`, both modulo `X^prec`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenLift {
    pub alpha: Vec<Coeff>,
    pub vectors: Vec<Vec<Coeff>>,
}

impl EigenLift {
    pub fn prec(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha_series(&self) -> TruncSeries {
        TruncSeries::new(1, 0, self.alpha.clone(), self.alpha.len() as i64)
    }

    /// Checks `Σ_{i≤k} (D_i - α_i)·u_{k-i} = 0` for every `k < prec`.
    pub fn residual_vanishes(&self, d: &SeriesMatrix) -> bool {
        let n = d.dim();
        (0..self.prec()).all(|k| {
            let mut acc = vec![Coeff::zero(); n];
            for i in 0..=k {
                let di = d.coeff_matrix(i as i64).sub_scalar(&self.alpha[i]);
                for (a, x) in acc.iter_mut().zip(di.mul_vec(&self.vectors[k - i])) {
                    *a += &x;
                }
            }
            acc.iter().all(Coeff::is_zero)
        })
    }
}

/// Lifts the eigenvalue `alpha0` of `D_0` to an eigenvalue of `D(X)`.
///
/// The eigenvector is normalized so that its first nonzero constant entry
/// is `1` and the same entry of every higher coefficient vanishes; each step
/// then solves one bordered linear system.
pub fn hensel_lift_eigen(d: &SeriesMatrix, alpha0: &Coeff, prec: usize) -> Result<EigenLift, OracleError> {
    if d.low().is_some_and(|l| l < 0) {
        return Err(OracleError::NegativePowers);
    }
    let n = d.dim();
    let shifted = d.coeff_matrix(0).sub_scalar(alpha0);
    let kernel = shifted.nullspace()?;
    if kernel.len() != 1 {
        return Err(OracleError::NotSimple(alpha0.to_string()));
    }
    let mut u0 = kernel.into_iter().next().expect("one kernel vector");
    let pivot = u0.iter().position(|c| !c.is_zero()).expect("kernel vector is nonzero");
    let scale = u0[pivot].inv().map_err(|_| OracleError::NonUnitPivot)?;
    for c in u0.iter_mut() {
        *c = &*c * &scale;
    }

    // [[D_0 - α_0, -u_0], [e_p^T, 0]]
    let bordered = CoeffMatrix::from_fn(n + 1, n + 1, |i, j| match (i < n, j < n) {
        (true, true) => shifted.get(i, j).clone(),
        (true, false) => -&u0[i],
        (false, true) if j == pivot => Coeff::one(),
        _ => Coeff::zero(),
    });
    let inverse = bordered.inverse()?.ok_or_else(|| OracleError::NotSimple(alpha0.to_string()))?;

    let mut alpha = vec![alpha0.clone()];
    let mut vectors = vec![u0];
    for k in 1..prec {
        // (D_0 - α_0)u_k - α_k u_0 = -Σ_{i≥1} D_i u_{k-i} + Σ_{1≤i<k} α_i u_{k-i}
        let mut rhs = vec![Coeff::zero(); n + 1];
        for i in 1..=k {
            let di = d.coeff_matrix(i as i64);
            for (r, x) in rhs.iter_mut().zip(di.mul_vec(&vectors[k - i])) {
                *r -= &x;
            }
        }
        for i in 1..k {
            for (r, x) in rhs.iter_mut().zip(&vectors[k - i]) {
                *r += &(&alpha[i] * x);
            }
        }
        let sol = inverse.mul_vec(&rhs);
        alpha.push(sol[n].clone());
        vectors.push(sol[..n].to_vec());
    }
    Ok(EigenLift { alpha, vectors })
}
