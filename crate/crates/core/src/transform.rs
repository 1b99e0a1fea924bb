//! The local Fourier transforms `F^(0,∞)`, `F^(∞,0)` and `F^(∞,∞)`.
//!
//! Each transform solves a two-equation system by series manipulation:
//!
//! ```text
//! ∂_t α + t' = 0,      α + t·t' = β
//! ```
//!
//! The first equation expresses the old uniformizer as `Y·w(Y)` in the new
//! uniformizer `Y` (`w` a unit series found by [`TruncSeries::solve_branch`]);
//! substituting into the second gives `β`. The output piece is
//! `[n]_*([Y∂_Y(β) + s/2] ⊗ R)` with `n = r + s`, `r - s` or `s - r`.
//!
//! Precision is counted in normalized coefficients: with `prec = N` the
//! series `b(Y) = -(1/n)·Y^{s+1}·β'(Y)` is known modulo `Y^N`, so `β` is
//! known modulo `Y^{N-s}`. The exponential data `α` of the input is taken as
//! an exact Laurent polynomial.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use thiserror::Error;

use crate::coeff::{Coeff, CoeffRing};
use crate::connection::{Connection, ConnectionPiece, ExponentialFactor, Point};
use crate::series::{SeriesError, TruncSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("{kind} transform needs a piece at {expected}, got {found}")]
    WrongPoint { kind: TransformKind, expected: Point, found: Point },
    #[error("transform of a purely regular piece is not defined")]
    PurelyRegular,
    #[error("ramification equals pole order (r = s = {0}) at infinity")]
    EqualRamification(u32),
    #[error("{kind} transform needs {needed}, got r = {r}, s = {s}")]
    Ramification { kind: TransformKind, needed: &'static str, r: u32, s: u32 },
    #[error("precision {prec} is below the floor s + 1 = {floor}")]
    PrecisionInsufficient { prec: usize, floor: usize },
    #[error("no {n}-th root of {value} in the coefficient ring; pass an explicit branch")]
    NoBranch { n: u32, value: String },
    #[error("branch {branch} is not a {n}-th root of {value}")]
    InvalidBranch { branch: String, n: u32, value: String },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("piece {index}: {source}")]
    Piece {
        index: usize,
        #[source]
        source: Box<TransformError>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformKind {
    ZeroToInf,
    InfToZero,
    InfToInf,
}

impl TransformKind {
    pub const ALL: [TransformKind; 3] = [TransformKind::ZeroToInf, TransformKind::InfToZero, TransformKind::InfToInf];

    pub fn label(self) -> &'static str {
        match self {
            TransformKind::ZeroToInf => "0-inf",
            TransformKind::InfToZero => "inf-0",
            TransformKind::InfToInf => "inf-inf",
        }
    }

    pub fn input_point(self) -> Point {
        match self {
            TransformKind::ZeroToInf => Point::Zero,
            _ => Point::Infinity,
        }
    }

    pub fn output_point(self) -> Point {
        match self {
            TransformKind::InfToZero => Point::Zero,
            _ => Point::Infinity,
        }
    }

    /// Ramification of the output piece.
    pub fn output_ram(self, r: u32, s: u32) -> u32 {
        match self {
            TransformKind::ZeroToInf => r + s,
            TransformKind::InfToZero => r - s,
            TransformKind::InfToInf => s - r,
        }
    }

    /// The factor `r/n` in `b_s = (r/n)·a_s`.
    pub fn coefficient_ratio(self, r: u32, s: u32) -> BigRational {
        BigRational::new((r as i64).into(), (self.output_ram(r, s) as i64).into())
    }

    /// Checks the dispatch conditions on `(point, r, s)`.
    pub fn check(self, point: Point, r: u32, s: u32) -> Result<(), TransformError> {
        if point != self.input_point() {
            return Err(TransformError::WrongPoint { kind: self, expected: self.input_point(), found: point });
        }
        if s == 0 {
            return Err(TransformError::PurelyRegular);
        }
        match self {
            TransformKind::ZeroToInf => Ok(()),
            _ if r == s => Err(TransformError::EqualRamification(r)),
            TransformKind::InfToZero if r < s => Err(TransformError::Ramification { kind: self, needed: "r > s", r, s }),
            TransformKind::InfToInf if s < r => Err(TransformError::Ramification { kind: self, needed: "s > r", r, s }),
            _ => Ok(()),
        }
    }

    /// The element whose `n`-th root is the branch: `a_0` at zero, `-a_0`
    /// at infinity.
    fn branch_target(self, a0: &Coeff) -> Coeff {
        match self {
            TransformKind::ZeroToInf => a0.clone(),
            _ => -a0,
        }
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TransformKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "0-inf" | "zero_to_inf" => Ok(TransformKind::ZeroToInf),
            "inf-0" | "inf_to_zero" => Ok(TransformKind::InfToZero),
            "inf-inf" | "inf_to_inf" => Ok(TransformKind::InfToInf),
            other => Err(format!("unknown transform kind `{other}` (expected 0-inf, inf-0 or inf-inf)")),
        }
    }
}

/// How the branch (the root fixing one of the conjugate solutions) is chosen.
///
/// The branch is `T/Z'` at zero for `F^(0,∞)` (an `(r+s)`-th root of `a_0`),
/// `T'/Z` for `F^(∞,0)` (an `(r-s)`-th root of `-a_0`) and `Z/Z'` for
/// `F^(∞,∞)` (an `(s-r)`-th root of `-a_0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Branch {
    /// Distinguished root in the given ring.
    Auto(CoeffRing),
    Explicit(Coeff),
}

impl Default for Branch {
    fn default() -> Self {
        Branch::Auto(CoeffRing::Rational)
    }
}

/// Everything computed while transforming one piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceSolution {
    pub kind: TransformKind,
    /// Normalized symbol `a_0, a_1, …` of the input.
    pub a: TruncSeries,
    /// The branch actually used.
    pub branch: Coeff,
    /// `w` with old uniformizer `= Y·w(Y)`.
    pub substitution: TruncSeries,
    /// Exponential data of the output, known modulo `Y^{prec-s}`.
    pub beta: TruncSeries,
    /// Normalized symbol of the output, known modulo `Y^{prec}`.
    pub b: TruncSeries,
    /// Output piece (not canonicalized).
    pub piece: ConnectionPiece,
}

/// Solution of the reduced system for an arbitrary symbol `a(X)`:
///
/// - `F^(0,∞)`: `a(X) = (X/Y)^{r+s}`, `b(Y) = (X/Y)^r`;
/// - `F^(∞,0)`: `a(X) = -(Y/X)^{r-s}`, `b(Y) = -(Y/X)^r`;
/// - `F^(∞,∞)`: `a(X) = -(X/Y)^{s-r}`, `b(Y) = (Y/X)^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedSolution {
    pub branch: Coeff,
    /// `w = X/Y` as a series in `Y`.
    pub substitution: TruncSeries,
    pub b: TruncSeries,
}

fn resolve_branch(kind: TransformKind, n: u32, a0: &Coeff, branch: &Branch) -> Result<Coeff, TransformError> {
    let target = kind.branch_target(a0);
    match branch {
        Branch::Explicit(c) => {
            if c.pow(n) != target {
                return Err(TransformError::InvalidBranch { branch: c.to_string(), n, value: target.to_string() });
            }
            Ok(c.clone())
        }
        Branch::Auto(ring) => ring.nth_root(&target, n).ok_or(TransformError::NoBranch { n, value: target.to_string() }),
    }
}

/// Solves the reduced system for `a` (denominator 1, valuation 0).
pub fn reduced_solve(kind: TransformKind, r: u32, s: u32, a: &TruncSeries, branch: &Branch) -> Result<ReducedSolution, TransformError> {
    let n = kind.output_ram(r, s);
    let a0 = a.coeff(0)?;
    let branch = resolve_branch(kind, n, &a0, branch)?;
    let r64 = r as i64;
    let (substitution, b) = match kind {
        TransformKind::ZeroToInf => {
            let w = TruncSeries::solve_branch(a, n, &branch)?;
            let b = w.pow(r64)?;
            (w, b)
        }
        TransformKind::InfToZero => {
            let w0 = branch.inv().map_err(SeriesError::from)?;
            let u = a.neg().invert_unit()?;
            let w = TruncSeries::solve_branch(&u, n, &w0)?;
            let b = w.pow(-r64)?.neg();
            (w, b)
        }
        TransformKind::InfToInf => {
            let w = TruncSeries::solve_branch(&a.neg(), n, &branch)?;
            let b = w.pow(-r64)?;
            (w, b)
        }
    };
    Ok(ReducedSolution { branch, substitution, b })
}

/// The normalized symbol `b(Y) = -(1/n)·Y^{s+1}·β'(Y)` of an output series.
pub fn normalized_symbol(beta: &TruncSeries, n: u32, s: u32) -> TruncSeries {
    beta.differentiate().shift(s as i64 + 1).scale_rational(&BigRational::new((-1).into(), (n as i64).into()))
}

/// Transforms one piece, keeping the intermediate series.
pub fn solve_piece(kind: TransformKind, piece: &ConnectionPiece, prec: usize, branch: &Branch) -> Result<PieceSolution, TransformError> {
    let r = piece.ram();
    let s = piece.pole_order();
    kind.check(piece.point(), r, s)?;
    let floor = s as usize + 1;
    if prec < floor {
        return Err(TransformError::PrecisionInsufficient { prec, floor });
    }
    let n = kind.output_ram(r, s);
    let p = prec as i64;
    let s64 = s as i64;
    let a = TruncSeries::new(1, 0, piece.factor().symbol(prec), p);
    let reduced = reduced_solve(kind, r, s, &a, branch)?;
    let w = &reduced.substitution;

    // old uniformizer X = Y·w(Y); α(X) is needed modulo Y^{prec-s}
    let x = w.shift(1);
    let alpha = piece.factor().alpha().extend_exact(p - s64);
    let r64 = r as i64;
    let tt = match kind {
        TransformKind::ZeroToInf => w.pow(r64)?,
        _ => w.pow(-r64)?,
    };
    let beta = alpha.compose(&x)?.add(&tt.shift(-s64))?.truncate(p - s64);
    let b = normalized_symbol(&beta, n, s);

    let factor = ExponentialFactor::new(kind.output_point(), n, beta.clone()).expect("output ramification is positive");
    let shift = Coeff::ratio(s as i64, 2);
    let out = ConnectionPiece::new(factor, piece.regular().shifted(&shift));
    Ok(PieceSolution { kind, a, branch: reduced.branch, substitution: reduced.substitution, beta, b, piece: out })
}

/// Residuals of both defining equations, as series in the new uniformizer:
/// `∂_t α + t'` and `α + t·t' - β`. Both vanish to their precision for a
/// correct solution.
pub fn residuals(piece: &ConnectionPiece, sol: &PieceSolution) -> Result<(TruncSeries, TruncSeries), TransformError> {
    let r = piece.ram() as i64;
    let n = sol.piece.ram() as i64;
    let s = piece.pole_order() as i64;
    let prec = sol.beta.prec() + s;
    let x = sol.substitution.shift(1);
    let alpha = piece.factor().alpha().extend_exact(prec);
    let dalpha = alpha.differentiate().extend_exact(prec).compose(&x)?;
    let one_over_r = Coeff::ratio(1, r);
    let (dt_alpha, t, t_prime) = match sol.kind {
        TransformKind::ZeroToInf => {
            // t = X^r, ∂_t = (1/r)·X^{1-r}·d/dX, t' = Y^{-(r+s)}
            let d = dalpha.mul(&x.pow(1 - r)?)?.scale(&one_over_r);
            (d, x.pow(r)?, TruncSeries::monomial(1, -n, Coeff::one(), prec))
        }
        _ => {
            // t = X^{-r}, ∂_t = -(1/r)·X^{1+r}·d/dX, t' = Y^{r-s} or Y^{-(s-r)}
            let d = dalpha.mul(&x.pow(1 + r)?)?.scale(&-one_over_r);
            let e = if sol.kind == TransformKind::InfToZero { n } else { -n };
            (d, x.pow(-r)?, TruncSeries::monomial(1, e, Coeff::one(), prec))
        }
    };
    let first = dt_alpha.add(&t_prime)?;
    let lhs = alpha.compose(&x)?.add(&t.mul(&t_prime)?)?;
    let second = lhs.sub(&sol.beta)?;
    Ok((first, second))
}

pub fn lft_zero_to_inf(piece: &ConnectionPiece, prec: usize, branch: &Branch) -> Result<ConnectionPiece, TransformError> {
    Ok(solve_piece(TransformKind::ZeroToInf, piece, prec, branch)?.piece)
}

pub fn lft_inf_to_zero(piece: &ConnectionPiece, prec: usize, branch: &Branch) -> Result<ConnectionPiece, TransformError> {
    Ok(solve_piece(TransformKind::InfToZero, piece, prec, branch)?.piece)
}

pub fn lft_inf_to_inf(piece: &ConnectionPiece, prec: usize, branch: &Branch) -> Result<ConnectionPiece, TransformError> {
    Ok(solve_piece(TransformKind::InfToInf, piece, prec, branch)?.piece)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TransformOptions {
    pub prec: usize,
    /// Explicit branch applied to every piece; otherwise the distinguished
    /// root in `ring`.
    pub branch: Option<Coeff>,
    pub ring: CoeffRing,
}

impl TransformOptions {
    pub fn new(prec: usize) -> Self {
        TransformOptions { prec, ..Default::default() }
    }

    fn branch(&self) -> Branch {
        match &self.branch {
            Some(c) => Branch::Explicit(c.clone()),
            None => Branch::Auto(self.ring.clone()),
        }
    }
}

/// Transforms a direct sum piece by piece and returns it in canonical form,
/// together with the branches used.
pub fn transform_connection_with_branches(
    conn: &Connection,
    kind: TransformKind,
    opts: &TransformOptions,
) -> Result<(Connection, Vec<Coeff>), TransformError> {
    let branch = opts.branch();
    let mut pieces = Vec::with_capacity(conn.pieces.len());
    let mut branches = Vec::with_capacity(conn.pieces.len());
    for (index, piece) in conn.pieces.iter().enumerate() {
        let sol = solve_piece(kind, piece, opts.prec, &branch).map_err(|e| TransformError::Piece { index, source: Box::new(e) })?;
        pieces.push(sol.piece.canonicalize_in(&opts.ring));
        branches.push(sol.branch);
    }
    Ok((Connection::new(pieces), branches))
}

pub fn transform_connection(conn: &Connection, kind: TransformKind, opts: &TransformOptions) -> Result<Connection, TransformError> {
    Ok(transform_connection_with_branches(conn, kind, opts)?.0)
}
