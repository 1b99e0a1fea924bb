//! Truncated Puiseux series with exact coefficients.
//!
//! A [`TruncSeries`] represents `Σ_{k} c_k X^{k/denom}` known modulo
//! `X^{prec/denom}`. Exponents are stored as integers in units of
//! `1/denom`. Nonzero series are normalized so that their first stored
//! coefficient is nonzero; the zero series has no coefficients and
//! `low == prec`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::coeff::{Coeff, CoeffError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("ramification denominators differ ({0} vs {1})")]
    DenomMismatch(u32, u32),
    #[error("leading coefficient {0} is not a unit")]
    NotUnit(String),
    #[error("operation needs a nonzero series")]
    ZeroSeries,
    #[error("substituted series must have positive valuation, got {0}")]
    NonPositiveValuation(i64),
    #[error("no precision left: the series carries no known coefficients")]
    PrecisionExhausted,
    #[error("coefficient of exponent {exp} lies beyond the precision {prec}")]
    BeyondPrecision { exp: i64, prec: i64 },
    #[error("initial branch value does not satisfy w0^{n} = {expected}")]
    BranchMismatch { n: u32, expected: String },
    #[error("operation needs integral exponents (denominator {0})")]
    FractionalExponent(u32),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    denom: u32,
    low: i64,
    coeffs: Vec<Coeff>,
    prec: i64,
}

impl TruncSeries {
    /// Builds a series from coefficients starting at exponent `low`,
    /// known up to (excluding) exponent `prec`. Coefficients at or beyond
    /// `prec` are discarded.
    pub fn new(denom: u32, low: i64, coeffs: Vec<Coeff>, prec: i64) -> Self {
        assert!(denom > 0, "denominator must be positive");
        let mut s = TruncSeries { denom, low, coeffs, prec };
        s.normalize();
        s
    }

    pub fn zero(denom: u32, prec: i64) -> Self {
        TruncSeries { denom, low: prec, coeffs: Vec::new(), prec }
    }

    /// The constant `c` known to `prec`.
    pub fn constant(c: Coeff, prec: i64) -> Self {
        Self::new(1, 0, vec![c], prec)
    }

    /// `c · X^exp` known to `prec`.
    pub fn monomial(denom: u32, exp: i64, c: Coeff, prec: i64) -> Self {
        Self::new(denom, exp, vec![c], prec)
    }

    /// Builds a series from `(exponent, coefficient)` pairs.
    pub fn from_terms(denom: u32, terms: impl IntoIterator<Item = (i64, Coeff)>, prec: i64) -> Self {
        let terms: Vec<(i64, Coeff)> = terms.into_iter().filter(|(e, c)| *e < prec && !c.is_zero()).collect();
        let Some(low) = terms.iter().map(|(e, _)| *e).min() else {
            return Self::zero(denom, prec);
        };
        let mut coeffs = vec![Coeff::zero(); (prec - low) as usize];
        for (e, c) in terms {
            coeffs[(e - low) as usize] += &c;
        }
        Self::new(denom, low, coeffs, prec)
    }

    fn normalize(&mut self) {
        let keep = (self.prec - self.low).max(0) as usize;
        self.coeffs.truncate(keep);
        self.coeffs.resize(keep, Coeff::zero());
        let lead = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.coeffs.len());
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.low = self.prec;
        } else {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
    }

    pub fn denom(&self) -> u32 {
        self.denom
    }

    /// Exponent (in units of `1/denom`) of the leading term, or `prec` for zero.
    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Number of known coefficients from the leading term on.
    pub fn relative_prec(&self) -> i64 {
        self.prec - self.low
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&Coeff> {
        self.coeffs.first()
    }

    /// Coefficient of `X^{exp/denom}`; errors past the precision.
    pub fn coeff(&self, exp: i64) -> Result<Coeff, SeriesError> {
        if exp >= self.prec {
            return Err(SeriesError::BeyondPrecision { exp, prec: self.prec });
        }
        if exp < self.low {
            return Ok(Coeff::zero());
        }
        Ok(self.coeffs[(exp - self.low) as usize].clone())
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Coeff)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn truncate(&self, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        Self::new(self.denom, self.low, self.coeffs.clone(), prec)
    }

    /// Treats the known terms as an exact polynomial and raises the precision.
    pub fn extend_exact(&self, prec: i64) -> Self {
        if self.is_zero() {
            return Self::zero(self.denom, prec.max(self.prec));
        }
        let prec = prec.max(self.prec);
        Self::new(self.denom, self.low, self.coeffs.clone(), prec)
    }

    /// Multiplies by `X^{k/denom}`.
    pub fn shift(&self, k: i64) -> Self {
        TruncSeries { denom: self.denom, low: self.low + k, coeffs: self.coeffs.clone(), prec: self.prec + k }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        Self::new(self.denom, self.low, self.coeffs.iter().map(|x| x * c).collect(), self.prec)
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        self.scale(&Coeff::from(q.clone()))
    }

    /// Re-expresses the series over denominator `denom * k` (exact).
    pub fn rescale(&self, k: u32) -> Self {
        assert!(k > 0);
        let k64 = k as i64;
        let mut coeffs = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                coeffs.extend(std::iter::repeat(Coeff::zero()).take(k as usize - 1));
            }
            coeffs.push(c.clone());
        }
        Self::new(self.denom * k, self.low * k64, coeffs, self.prec * k64)
    }

    /// Substitutes `X ↦ c·X` on integral exponents: the coefficient at `e` is
    /// multiplied by `c^e`.
    pub fn substitute_scale(&self, c: &Coeff) -> Result<Self, SeriesError> {
        if self.denom != 1 {
            return Err(SeriesError::FractionalExponent(self.denom));
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (i, x) in self.coeffs.iter().enumerate() {
            coeffs.push(x * &c.powi(self.low + i as i64)?);
        }
        Ok(Self::new(1, self.low, coeffs, self.prec))
    }

    fn check_denom(&self, other: &Self) -> Result<(), SeriesError> {
        if self.denom != other.denom {
            return Err(SeriesError::DenomMismatch(self.denom, other.denom));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Result<Self, SeriesError> {
        self.check_denom(other)?;
        let prec = self.prec.min(other.prec);
        let low = self.low.min(other.low).min(prec);
        let mut coeffs = vec![Coeff::zero(); (prec - low) as usize];
        for (e, c) in self.terms() {
            if e < prec {
                coeffs[(e - low) as usize] += c;
            }
        }
        for (e, c) in other.terms() {
            if e < prec {
                let slot = &mut coeffs[(e - low) as usize];
                if negate {
                    *slot -= c;
                } else {
                    *slot += c;
                }
            }
        }
        Ok(Self::new(self.denom, low, coeffs, prec))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.denom, self.low, self.coeffs.iter().map(|c| -c).collect(), self.prec)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_denom(other)?;
        let prec = (self.prec + other.low).min(other.prec + self.low);
        let low = self.low + other.low;
        if prec <= low {
            return Ok(Self::zero(self.denom, prec));
        }
        let n = (prec - low) as usize;
        let mut coeffs = vec![Coeff::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    coeffs[i + j] += &(a * b);
                }
            }
        }
        Ok(Self::new(self.denom, low, coeffs, prec))
    }

    /// Multiplicative inverse; the leading coefficient must be a unit.
    pub fn invert_unit(&self) -> Result<Self, SeriesError> {
        let c0 = self.leading().ok_or(SeriesError::ZeroSeries)?;
        let inv0 = c0.inv().map_err(|_| SeriesError::NotUnit(c0.to_string()))?;
        let n = self.coeffs.len();
        let mut d: Vec<Coeff> = Vec::with_capacity(n);
        d.push(inv0.clone());
        for k in 1..n {
            let mut acc = Coeff::zero();
            for i in 1..=k {
                let ci = &self.coeffs[i];
                if !ci.is_zero() {
                    acc += &(ci * &d[k - i]);
                }
            }
            d.push(-(&acc * &inv0));
        }
        Ok(Self::new(self.denom, -self.low, d, -self.low + n as i64))
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        self.mul(&other.invert_unit()?)
    }

    /// Derivative with respect to `X`.
    pub fn differentiate(&self) -> Self {
        let d = self.denom as i64;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let e = self.low + i as i64;
                c.scale(&BigRational::new(e.into(), d.into()))
            })
            .collect();
        if self.is_zero() {
            return Self::zero(self.denom, self.prec - d);
        }
        Self::new(self.denom, self.low - d, coeffs, self.prec - d)
    }

    /// `X · d/dX`, which preserves exponents.
    pub fn euler(&self) -> Self {
        self.differentiate().shift(self.denom as i64)
    }

    pub fn pow(&self, e: i64) -> Result<Self, SeriesError> {
        if e == 0 {
            let rel = if self.is_zero() { 1 } else { self.relative_prec() };
            return Ok(Self::new(self.denom, 0, vec![Coeff::one()], rel));
        }
        if e < 0 {
            return self.invert_unit()?.pow(-e);
        }
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        let mut k = e as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc.expect("positive exponent"))
    }

    /// Substitutes `g` for the variable of `self`: returns `self(g(Y))`.
    ///
    /// `self` must have integral exponents and `g` positive valuation.
    /// Negative powers of the variable become powers of `g^{-1}`.
    pub fn compose(&self, g: &Self) -> Result<Self, SeriesError> {
        if self.denom != 1 {
            return Err(SeriesError::FractionalExponent(self.denom));
        }
        if g.is_zero() || g.low <= 0 {
            return Err(SeriesError::NonPositiveValuation(if g.is_zero() { g.prec } else { g.low }));
        }
        let big_l = self.low;
        let n = self.prec - self.low;
        if n <= 0 {
            return Err(SeriesError::PrecisionExhausted);
        }
        // self = X^L · Σ_{k<n} f_k X^k;  the tail is O(g^n).
        let v = g.low;
        let mut target = v * n;
        let mut powers: Vec<Self> = Vec::with_capacity(n as usize);
        let mut p = Self::new(g.denom, 0, vec![Coeff::one()], g.prec - g.low + v * n);
        for k in 0..n {
            if k > 0 {
                p = p.mul(g)?;
                if !self.coeffs[k as usize].is_zero() {
                    target = target.min(p.prec);
                }
            }
            powers.push(p.clone());
        }
        let mut sum = Self::zero(g.denom, target);
        for (k, pk) in powers.iter().enumerate() {
            let fk = &self.coeffs[k];
            if fk.is_zero() {
                continue;
            }
            sum = sum.add(&pk.scale(fk).truncate(target).extend_exact(target))?;
        }
        if big_l == 0 {
            return Ok(sum);
        }
        sum.mul(&g.pow(big_l)?)
    }

    /// Solves `w(Y)^n = u(Y·w(Y))` for a unit power series `w` with
    /// `w(0) = w0`. `u` must have integral exponents starting at zero.
    pub fn solve_branch(u: &Self, n: u32, w0: &Coeff) -> Result<Self, SeriesError> {
        if u.denom != 1 {
            return Err(SeriesError::FractionalExponent(u.denom));
        }
        if u.is_zero() || u.low != 0 {
            return Err(SeriesError::NonPositiveValuation(u.low));
        }
        let u0 = &u.coeffs[0];
        if &w0.pow(n) != u0 {
            return Err(SeriesError::BranchMismatch { n, expected: u0.to_string() });
        }
        let d = &Coeff::from_int(n as i64) * &w0.pow(n - 1);
        let d_inv = d.inv().map_err(|_| SeriesError::NotUnit(d.to_string()))?;
        let prec = u.prec;
        let mut w = vec![w0.clone()];
        for k in 1..prec {
            // Coefficient k of u(Y w) and of w^n, both computed with w_k = 0.
            let mut cur = w.clone();
            cur.push(Coeff::zero());
            let ws = Self::new(1, 0, cur, k + 1);
            let yw = ws.shift(1);
            let lhs = u.truncate(k + 1).compose(&yw)?.coeff(k)?;
            let rhs = ws.pow(n as i64)?.coeff(k)?;
            w.push(&(&lhs - &rhs) * &d_inv);
        }
        Ok(Self::new(1, 0, w, prec))
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = |e: i64| -> String {
            let q = BigRational::new(e.into(), (self.denom as i64).into());
            if q.is_zero() {
                String::new()
            } else if q.is_one() {
                "X".to_string()
            } else {
                format!("X^({q})")
            }
        };
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let v = var(e);
            if v.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{v}")?;
            }
        }
        if !first {
            write!(f, " + ")?;
        }
        let v = var(self.prec);
        write!(f, "O({})", if v.is_empty() { "1".to_string() } else { v })
    }
}
