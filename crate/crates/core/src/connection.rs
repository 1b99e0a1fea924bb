//! Formal connections in normal form `[r]_*([T∂_T(α)] ⊗ R)`.
//!
//! A piece is described by the point it lives at, a ramification index `r`,
//! a Laurent polynomial `α` in the local uniformizer (`T = t^{1/r}` at zero,
//! `Z = t^{-1/r}` at infinity) and a regular part given by eigenvalues with
//! Jordan block sizes. The exponential data `α` is treated as exact: only
//! its terms of negative exponent matter for the isomorphism class, but the
//! remaining terms are kept until [`ConnectionPiece::canonicalize`] drops
//! them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::coeff::{floor_rational, Coeff, CoeffRing};
use crate::series::TruncSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConnectionError {
    #[error("ramification index must be positive")]
    ZeroRamification,
    #[error("regular part must contain at least one block")]
    EmptyRegular,
    #[error("Jordan block sizes must be positive")]
    ZeroBlock,
    #[error("exponential data must use integral exponents in the uniformizer")]
    FractionalExponent,
    #[error("operation is undefined for a purely regular piece")]
    PurelyRegular,
    #[error("coefficient ring has no primitive {0}-th root of unity")]
    MissingRootOfUnity(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Zero,
    Infinity,
}

impl Point {
    pub fn as_str(self) -> &'static str {
        match self {
            Point::Zero => "zero",
            Point::Infinity => "infinity",
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The rank-one twist `[T∂_T(α)]` before pushforward along `[r]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentialFactor {
    point: Point,
    ram: u32,
    alpha: TruncSeries,
}

impl ExponentialFactor {
    /// `alpha` must have denominator 1; its known terms are taken as exact.
    pub fn new(point: Point, ram: u32, alpha: TruncSeries) -> Result<Self, ConnectionError> {
        if ram == 0 {
            return Err(ConnectionError::ZeroRamification);
        }
        if alpha.denom() != 1 {
            return Err(ConnectionError::FractionalExponent);
        }
        Ok(ExponentialFactor { point, ram, alpha })
    }

    /// Builds the factor from `(exponent, coefficient)` pairs, taken as an
    /// exact Laurent polynomial: the precision is one past the highest
    /// nonzero exponent, and at least zero.
    pub fn from_terms(point: Point, ram: u32, terms: impl IntoIterator<Item = (i64, Coeff)>) -> Result<Self, ConnectionError> {
        let terms: Vec<(i64, Coeff)> = terms.into_iter().collect();
        let bound = terms.iter().map(|(e, _)| e + 1).max().unwrap_or(0).max(0);
        let alpha = TruncSeries::from_terms(1, terms, bound);
        let prec = alpha.terms().map(|(e, _)| e + 1).max().unwrap_or(0).max(0);
        Self::new(point, ram, alpha.truncate(prec))
    }

    pub fn point(&self) -> Point {
        self.point
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    pub fn alpha(&self) -> &TruncSeries {
        &self.alpha
    }

    /// Pole order `s` of `α` (0 for a purely regular piece).
    pub fn pole_order(&self) -> u32 {
        if self.alpha.is_zero() {
            0
        } else {
            (-self.alpha.low()).max(0) as u32
        }
    }

    /// Coefficient of `α` at exponent `j`, zero outside the stored terms.
    pub fn alpha_coeff(&self, j: i64) -> Coeff {
        self.alpha.coeff(j).unwrap_or_else(|_| Coeff::zero())
    }

    /// Nonzero terms of `α`.
    pub fn alpha_terms(&self) -> Vec<(i64, Coeff)> {
        self.alpha.terms().map(|(e, c)| (e, c.clone())).collect()
    }

    /// The normalized symbol `a_i = ((s - i)/r)·α_{i-s}` for `i < n`.
    ///
    /// At zero this is `-T^s·t∂_t(α)`, at infinity `Z^s·t∂_t(α)`; both give
    /// the same formula in the uniformizer.
    pub fn symbol(&self, n: usize) -> Vec<Coeff> {
        let s = self.pole_order() as i64;
        let r = self.ram as i64;
        (0..n as i64)
            .map(|i| self.alpha_coeff(i - s).scale(&BigRational::new((s - i).into(), r.into())))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct JordanBlock {
    pub eigenvalue: Coeff,
    pub size: u32,
}

impl JordanBlock {
    pub fn new(eigenvalue: Coeff, size: u32) -> Self {
        JordanBlock { eigenvalue, size }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularPart {
    blocks: Vec<JordanBlock>,
}

impl RegularPart {
    pub fn new(blocks: Vec<JordanBlock>) -> Result<Self, ConnectionError> {
        if blocks.is_empty() {
            return Err(ConnectionError::EmptyRegular);
        }
        if blocks.iter().any(|b| b.size == 0) {
            return Err(ConnectionError::ZeroBlock);
        }
        Ok(RegularPart { blocks })
    }

    /// The one-dimensional regular connection `[c]`.
    pub fn scalar(c: Coeff) -> Self {
        RegularPart { blocks: vec![JordanBlock::new(c, 1)] }
    }

    pub fn blocks(&self) -> &[JordanBlock] {
        &self.blocks
    }

    pub fn dim(&self) -> u32 {
        self.blocks.iter().map(|b| b.size).sum()
    }

    /// Adds `shift` to every eigenvalue.
    pub fn shifted(&self, shift: &Coeff) -> Self {
        RegularPart { blocks: self.blocks.iter().map(|b| JordanBlock::new(&b.eigenvalue + shift, b.size)).collect() }
    }

    fn reduced(&self) -> Self {
        let mut blocks: Vec<JordanBlock> =
            self.blocks.iter().map(|b| JordanBlock::new(reduce_mod_integers(&b.eigenvalue), b.size)).collect();
        blocks.sort();
        RegularPart { blocks }
    }
}

/// Replaces `c` by `c - ⌊rational part of c⌋`.
pub fn reduce_mod_integers(c: &Coeff) -> Coeff {
    let fl = floor_rational(&c.rational_part());
    c - &Coeff::from(BigRational::from_integer(fl))
}

/// `[d]_*` applied to a regular part: each block `(c, n)` becomes the blocks
/// `(c + i/d, n)` for `i = 1..=d`.
pub fn pushforward_regular(d: u32, regular: &RegularPart) -> RegularPart {
    let mut blocks = Vec::with_capacity(regular.blocks.len() * d as usize);
    for b in &regular.blocks {
        for i in 1..=d {
            blocks.push(JordanBlock::new(&b.eigenvalue + &Coeff::ratio(i as i64, d as i64), b.size));
        }
    }
    RegularPart { blocks }
}

/// Slope, irregularity and rank of a piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariants {
    pub slope: BigRational,
    pub irregularity: u64,
    pub rank: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionPiece {
    factor: ExponentialFactor,
    regular: RegularPart,
}

impl ConnectionPiece {
    pub fn new(factor: ExponentialFactor, regular: RegularPart) -> Self {
        ConnectionPiece { factor, regular }
    }

    pub fn factor(&self) -> &ExponentialFactor {
        &self.factor
    }

    pub fn regular(&self) -> &RegularPart {
        &self.regular
    }

    pub fn point(&self) -> Point {
        self.factor.point
    }

    pub fn ram(&self) -> u32 {
        self.factor.ram
    }

    pub fn pole_order(&self) -> u32 {
        self.factor.pole_order()
    }

    pub fn invariants(&self) -> Invariants {
        let s = self.pole_order() as u64;
        let r = self.ram() as u64;
        let dim = self.regular.dim() as u64;
        Invariants {
            slope: BigRational::new(BigInt::from(s), BigInt::from(r)),
            irregularity: s * dim,
            rank: r * dim,
        }
    }

    /// Canonical form, using the coefficient ring the data lives in.
    pub fn canonicalize(&self) -> ConnectionPiece {
        self.canonicalize_in(&self.natural_ring())
    }

    /// The smallest ring holding every coefficient of the piece.
    pub fn natural_ring(&self) -> CoeffRing {
        let mut ring = CoeffRing::Rational;
        let coeffs = self.factor.alpha.terms().map(|(_, c)| c.clone()).chain(self.regular.blocks.iter().map(|b| b.eigenvalue.clone()));
        for c in coeffs {
            if let Some(j) = ring.join(&CoeffRing::of(&c)) {
                ring = j;
            }
        }
        ring
    }

    /// Whether canonicalization in `ring` picks a Galois-orbit representative
    /// (as opposed to a form relative to the chosen branch).
    pub fn orbit_minimized_in(&self, ring: &CoeffRing) -> bool {
        self.pole_order() == 0 || ring.root_of_unity(self.ram()).is_some()
    }

    /// Canonical form: drops the terms of `α` of nonnegative exponent,
    /// reduces eigenvalues modulo integers, sorts blocks and, when `ring`
    /// contains a primitive `r`-th root of unity `η`, replaces `α` by the
    /// lexicographically greatest of its conjugates `α(η^k T)`.
    pub fn canonicalize_in(&self, ring: &CoeffRing) -> ConnectionPiece {
        let terms: Vec<(i64, Coeff)> = self.factor.alpha_terms().into_iter().filter(|(e, _)| *e < 0).collect();
        let mut best = terms.clone();
        if !terms.is_empty() {
            if let Some(eta) = ring.root_of_unity(self.ram()) {
                for k in 1..self.ram() {
                    let ek = eta.pow(k);
                    let cand: Vec<(i64, Coeff)> = terms
                        .iter()
                        .map(|(e, c)| (*e, c * &ek.powi(*e).expect("root of unity is a unit")))
                        .collect();
                    let key = |v: &[(i64, Coeff)]| v.iter().map(|(_, c)| c.clone()).collect::<Vec<_>>();
                    if key(&cand) > key(&best) {
                        best = cand;
                    }
                }
            }
        }
        let alpha = TruncSeries::from_terms(1, best, 0);
        ConnectionPiece {
            factor: ExponentialFactor { point: self.factor.point, ram: self.factor.ram, alpha },
            regular: self.regular.reduced(),
        }
    }

    /// Order `p` of the stabilizer of `α` under `T ↦ ηT`:
    /// `gcd(r, gcd{|j| : α_j ≠ 0, j < 0})`.
    pub fn stabilizer_order(&self) -> Result<u32, ConnectionError> {
        if self.pole_order() == 0 {
            return Err(ConnectionError::PurelyRegular);
        }
        let mut p = self.ram() as u64;
        for (e, _) in self.factor.alpha.terms() {
            if e < 0 {
                p = p.gcd(&e.unsigned_abs());
            }
        }
        Ok(p as u32)
    }

    pub fn is_irreducible(&self) -> Result<bool, ConnectionError> {
        Ok(self.stabilizer_order()? == 1 && self.regular.dim() == 1)
    }

    /// Splits `[r]_*` through `τ = T^p`, with `p` the stabilizer order, into
    /// `p` pieces of ramification `r/p`. Block `(c, n)` contributes
    /// `((c + j)/p, n)` for `j = 1..=p`. Purely regular pieces are split
    /// down to ramification 1.
    pub fn descend_ramification(&self) -> Vec<ConnectionPiece> {
        let p = match self.stabilizer_order() {
            Ok(p) => p,
            Err(_) => self.ram(),
        };
        if p == 1 {
            return vec![self.clone()];
        }
        let pi = p as i64;
        let terms: Vec<(i64, Coeff)> = self
            .factor
            .alpha_terms()
            .into_iter()
            .filter(|(e, _)| e.rem_euclid(pi) == 0)
            .map(|(e, c)| (e / pi, c))
            .collect();
        let factor = ExponentialFactor::from_terms(self.point(), self.ram() / p, terms).expect("valid ramification");
        (1..=p)
            .map(|j| {
                let blocks = self
                    .regular
                    .blocks
                    .iter()
                    .map(|b| {
                        let c = (&b.eigenvalue + &Coeff::from_int(j as i64)).scale(&BigRational::new(BigInt::one(), BigInt::from(p)));
                        JordanBlock::new(c, b.size)
                    })
                    .collect();
                ConnectionPiece { factor: factor.clone(), regular: RegularPart { blocks } }
            })
            .collect()
    }

    /// Pullback along `t ↦ -t`: `α_j ↦ ζ^j α_j` with `ζ^r = -1`.
    pub fn pullback_negate(&self, ring: &CoeffRing) -> Result<ConnectionPiece, ConnectionError> {
        let r = self.ram();
        let zeta = negation_root(ring, r).ok_or(ConnectionError::MissingRootOfUnity(2 * r))?;
        let terms = self
            .factor
            .alpha_terms()
            .into_iter()
            .map(|(e, c)| (e, &c * &zeta.powi(e).expect("root of unity is a unit")))
            .collect::<Vec<_>>();
        let prec = self.factor.alpha.prec();
        let alpha = TruncSeries::from_terms(1, terms, prec);
        Ok(ConnectionPiece { factor: ExponentialFactor { alpha, ..self.factor.clone() }, regular: self.regular.clone() })
    }
}

/// An `r`-th root of `-1` in `ring`: `-1` for odd `r`, otherwise a primitive
/// `2r`-th root of unity.
pub fn negation_root(ring: &CoeffRing, r: u32) -> Option<Coeff> {
    if r % 2 == 1 {
        Some(-Coeff::one())
    } else {
        ring.root_of_unity(2 * r)
    }
}

/// A formal direct sum of pieces.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Connection {
    pub pieces: Vec<ConnectionPiece>,
}

impl Connection {
    pub fn new(pieces: Vec<ConnectionPiece>) -> Self {
        Connection { pieces }
    }

    pub fn rank(&self) -> u64 {
        self.pieces.iter().map(|p| p.invariants().rank).sum()
    }

    pub fn irregularity(&self) -> u64 {
        self.pieces.iter().map(|p| p.invariants().irregularity).sum()
    }

    pub fn canonicalize_in(&self, ring: &CoeffRing) -> Connection {
        Connection { pieces: self.pieces.iter().map(|p| p.canonicalize_in(ring)).collect() }
    }
}

/// True when `c` is an integer rational.
pub(crate) fn is_integral(c: &Coeff) -> bool {
    c.as_rational().is_some_and(|q| q.is_integer())
}

/// True when two eigenvalues agree modulo integers.
pub fn congruent_mod_integers(a: &Coeff, b: &Coeff) -> bool {
    is_integral(&(a - b))
}
