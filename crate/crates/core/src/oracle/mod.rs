//! Independent verification of transform outputs through matrix models.
//!
//! Each transform has a matrix `D(X)` over the power series ring whose
//! characteristic polynomial encodes the reduced system. The output symbol
//! is recovered by Hensel-lifting a simple eigenvalue of `D_0` and compared
//! with the claimed output coefficient by coefficient. Regular parts are
//! checked by lifting a twisted symbol, and the shift systems are checked
//! for solvability with the claimed coefficients.

pub mod hensel;
pub mod infinity;
pub mod matrix;
pub mod zero;

use std::fmt;

use thiserror::Error;

use crate::coeff::{Coeff, CoeffRing};
use crate::connection::{congruent_mod_integers, negation_root, Connection, ConnectionError, ConnectionPiece};
use crate::transform::{normalized_symbol, TransformError, TransformKind};

use hensel::{hensel_lift_eigen, EigenLift};
use matrix::{laurent, LaurentPoly, SeriesMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("pivot is a nonzero zero divisor; the coefficient ring is not a field here")]
    NonUnitPivot,
    #[error("{0} is not a simple eigenvalue")]
    NotSimple(String),
    #[error("matrix has negative powers of the variable")]
    NegativePowers,
    #[error("coefficient ring: {0}")]
    Ring(String),
    #[error("input has {input} pieces but output has {output}")]
    PieceCount { input: usize, output: usize },
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Connection(#[from] ConnectionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub index: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub status: CheckStatus,
    pub mismatch: Option<Mismatch>,
    pub note: Option<String>,
}

impl IdentityCheck {
    pub fn pass(name: &str) -> Self {
        IdentityCheck { name: name.to_string(), status: CheckStatus::Pass, mismatch: None, note: None }
    }

    pub fn fail(name: &str, note: impl Into<String>) -> Self {
        IdentityCheck { name: name.to_string(), status: CheckStatus::Fail, mismatch: None, note: Some(note.into()) }
    }

    pub fn fail_at(name: &str, index: usize, expected: &Coeff, found: &Coeff) -> Self {
        IdentityCheck {
            name: name.to_string(),
            status: CheckStatus::Fail,
            mismatch: Some(Mismatch { index, expected: expected.to_string(), found: found.to_string() }),
            note: None,
        }
    }

    pub fn skipped(name: &str, note: impl Into<String>) -> Self {
        IdentityCheck { name: name.to_string(), status: CheckStatus::Skipped, mismatch: None, note: Some(note.into()) }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// True unless the check failed.
    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }
}

impl fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, self.status.as_str())?;
        if let Some(m) = &self.mismatch {
            write!(f, " at index {} (expected {}, found {})", m.index, m.expected, m.found)?;
        }
        if let Some(n) = &self.note {
            write!(f, " [{n}]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub kind: TransformKind,
    pub checks: Vec<IdentityCheck>,
    /// The eigenvalue of `D_0` whose lift matched the output.
    pub branch: Option<Coeff>,
    /// Output symbol `b_0, b_1, …` recovered from the matrix model.
    pub recovered_b: Vec<Coeff>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }

    pub fn check(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn first_failure(&self) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| !c.passed())
    }
}

pub fn verify_zero_to_inf(input: &ConnectionPiece, output: &ConnectionPiece, prec: usize, ring: &CoeffRing) -> Result<OracleReport, OracleError> {
    verify_piece(TransformKind::ZeroToInf, input, output, prec, ring)
}

pub fn verify_inf_to_zero(input: &ConnectionPiece, output: &ConnectionPiece, prec: usize, ring: &CoeffRing) -> Result<OracleReport, OracleError> {
    verify_piece(TransformKind::InfToZero, input, output, prec, ring)
}

pub fn verify_inf_to_inf(input: &ConnectionPiece, output: &ConnectionPiece, prec: usize, ring: &CoeffRing) -> Result<OracleReport, OracleError> {
    verify_piece(TransformKind::InfToInf, input, output, prec, ring)
}

/// Verifies that `output` is the transform of `input`, with `input` taken as
/// exact and output coefficients compared up to `prec` (and up to what the
/// output's precision determines).
pub fn verify_piece(kind: TransformKind, input: &ConnectionPiece, output: &ConnectionPiece, prec: usize, ring: &CoeffRing) -> Result<OracleReport, OracleError> {
    verify_with_known(kind, input, output, prec, ring, None)
}

/// Verifies a whole connection piece by piece, in order.
pub fn verify_connection(kind: TransformKind, input: &Connection, output: &Connection, prec: usize, ring: &CoeffRing) -> Result<Vec<OracleReport>, OracleError> {
    if input.pieces.len() != output.pieces.len() {
        return Err(OracleError::PieceCount { input: input.pieces.len(), output: output.pieces.len() });
    }
    input.pieces.iter().zip(&output.pieces).map(|(i, o)| verify_piece(kind, i, o, prec, ring)).collect()
}

/// Matrix model of one transform for a given symbol.
struct Model {
    kind: TransformKind,
    r: u32,
    s: u32,
    d: SeriesMatrix,
}

impl Model {
    fn new(kind: TransformKind, r: u32, s: u32, a: &[Coeff]) -> Result<Self, OracleError> {
        let d = match kind {
            TransformKind::ZeroToInf => zero::build_gamma(r, s, a),
            TransformKind::InfToZero => infinity::build_inf_zero_companion(r, s, a),
            TransformKind::InfToInf => infinity::build_inf_matrices(r, s, a)?.d,
        };
        Ok(Model { kind, r, s, d })
    }

    /// `(value, n)` such that the eigenvalues of `D_0` in question are the
    /// `n`-th roots of `value`.
    fn branch_equation(&self, a0: &Coeff) -> Result<(Coeff, u32), OracleError> {
        let n = self.kind.output_ram(self.r, self.s);
        Ok(match self.kind {
            TransformKind::ZeroToInf => (a0.clone(), n),
            TransformKind::InfToZero => (-a0, n),
            TransformKind::InfToInf => (-a0.inv().map_err(|e| OracleError::Ring(e.to_string()))?, n),
        })
    }

    /// `b = ±λ^r` modulo `X^prec` from a lifted eigenvalue.
    fn symbol_from(&self, lift: &EigenLift) -> Result<Vec<Coeff>, OracleError> {
        let lam = lift.alpha_series();
        let b = lam.pow(self.r as i64).map_err(TransformError::from)?;
        let b = if self.kind == TransformKind::InfToZero { b.neg() } else { b };
        Ok((0..lift.prec() as i64).map(|i| b.coeff(i).unwrap_or_default()).collect())
    }

    fn expected_char_poly(&self, a: &[Coeff]) -> Result<Vec<LaurentPoly>, OracleError> {
        let (r, s) = (self.r as usize, self.s as usize);
        Ok(match self.kind {
            TransformKind::ZeroToInf => {
                let n = r + s;
                let mut cp = vec![LaurentPoly::new(); n + 1];
                cp[n] = laurent([(0, Coeff::one())]);
                for (i, c) in a.iter().enumerate() {
                    cp[i] = laurent([(i as i64, -c)]);
                }
                cp
            }
            TransformKind::InfToZero => {
                let mut cp = vec![LaurentPoly::new(); r + 1];
                cp[r] = laurent([(0, Coeff::one())]);
                for (i, c) in a.iter().enumerate() {
                    cp[s - i] = laurent([(i as i64, c.clone())]);
                }
                cp
            }
            TransformKind::InfToInf => {
                let inv = a[0].inv().map_err(|e| OracleError::Ring(e.to_string()))?;
                let mut cp = vec![LaurentPoly::new(); s + 1];
                cp[s] = laurent([(0, Coeff::one())]);
                for (i, c) in a.iter().enumerate().skip(1) {
                    cp[s - i] = laurent([(i as i64, c * &inv)]);
                }
                cp[r] = laurent(cp[r].clone().into_iter().chain([(0, inv)]));
                cp
            }
        })
    }
}

fn poly_mismatch(found: &[LaurentPoly], expected: &[LaurentPoly]) -> Option<usize> {
    (0..found.len().max(expected.len())).find(|&k| found.get(k) != expected.get(k))
}

fn laurent_display(p: Option<&LaurentPoly>) -> Coeff {
    // Only used for reporting: the lowest coefficient.
    p.and_then(|p| p.values().next().cloned()).unwrap_or_default()
}

/// `known`: number of input symbol coefficients that are determined, or
/// `None` when the input is exact.
fn verify_with_known(
    kind: TransformKind,
    input: &ConnectionPiece,
    output: &ConnectionPiece,
    prec: usize,
    ring: &CoeffRing,
    known: Option<i64>,
) -> Result<OracleReport, OracleError> {
    let (r, s) = (input.ram(), input.pole_order());
    kind.check(input.point(), r, s)?;
    let n = kind.output_ram(r, s);
    let mut report = OracleReport { kind, checks: Vec::new(), branch: None, recovered_b: Vec::new() };

    let shape_ok = output.point() == kind.output_point()
        && output.ram() == n
        && output.pole_order() == s
        && output.regular().dim() == input.regular().dim();
    if !shape_ok {
        report.checks.push(IdentityCheck::fail(
            "shape",
            format!(
                "expected {} with ram {n}, pole order {s}, regular rank {}; found {} with ram {}, pole order {}, regular rank {}",
                kind.output_point(),
                input.regular().dim(),
                output.point(),
                output.ram(),
                output.pole_order(),
                output.regular().dim()
            ),
        ));
        return Ok(report);
    }
    report.checks.push(IdentityCheck::pass("shape"));

    let ring = [input.natural_ring(), output.natural_ring()].iter().fold(ring.clone(), |acc, x| acc.join(x).unwrap_or(acc));

    // symbol coefficients a_i vanish for i >= exact_len
    let max_exp = input.factor().alpha_terms().last().map_or(-1, |(e, _)| *e);
    let exact_len = s as i64 + 1 + max_exp.max(0);
    let model_len = match kind {
        TransformKind::ZeroToInf => exact_len.min((r + s) as i64),
        _ => s as i64 + 1,
    };
    let mut limit = prec as i64;
    if exact_len > model_len {
        limit = limit.min(model_len);
    }
    if let Some(k) = known {
        limit = limit.min(k);
    }
    limit = limit.min(output.factor().alpha().prec() + s as i64);
    let a = input.factor().symbol(model_len as usize);
    let model = Model::new(kind, r, s, &a)?;

    let cp = model.d.char_poly();
    let expected_cp = model.expected_char_poly(&a)?;
    report.checks.push(match poly_mismatch(&cp, &expected_cp) {
        None => IdentityCheck::pass("char_poly"),
        Some(k) => IdentityCheck::fail_at("char_poly", k, &laurent_display(expected_cp.get(k)), &laurent_display(cp.get(k))),
    });

    match kind {
        TransformKind::ZeroToInf => {
            let head = &a[..s as usize + 1];
            let m = zero::operator_matrix(r, s, head);
            let g = zero::build_gamma(r, s, head);
            report.checks.push(if m == g.pow(r) {
                IdentityCheck::pass("operator_matrix")
            } else {
                IdentityCheck::fail("operator_matrix", "operator matrix differs from the r-th power of the companion matrix")
            });
        }
        TransformKind::InfToInf => {
            let mats = infinity::build_inf_matrices(r, s, &a)?;
            report.checks.push(infinity::conjugation_checks(&mats));
        }
        TransformKind::InfToZero => {}
    }

    let out_b = normalized_symbol(output.factor().alpha(), n, s);
    let compared: Vec<usize> = (0..limit.max(0) as usize).filter(|&i| i != s as usize).collect();
    let lift_prec = (limit.max(0) as usize).max(s as usize + 1);

    let (target, root_deg) = model.branch_equation(&a[0])?;
    let candidates = ring.nth_roots(&target, root_deg);
    // (lift, symbol, length of matching prefix, first mismatch)
    let mut best: Option<(Coeff, Vec<Coeff>, usize, Option<(usize, Coeff, Coeff)>)> = None;
    for lam0 in &candidates {
        let lift = hensel_lift_eigen(&model.d, lam0, lift_prec)?;
        if !lift.residual_vanishes(&model.d) {
            report.checks.push(IdentityCheck::fail("eigen_residual", format!("lift of {lam0} does not satisfy the eigen equation")));
            return Ok(report);
        }
        let b = model.symbol_from(&lift)?;
        let mut matched = 0;
        let mut mismatch = None;
        for &i in &compared {
            let found = out_b.coeff(i as i64).unwrap_or_default();
            if found != b[i] {
                mismatch = Some((i, b[i].clone(), found));
                break;
            }
            matched += 1;
        }
        let better = match &best {
            None => true,
            Some((_, _, m, _)) => matched > *m,
        };
        if better {
            best = Some((lam0.clone(), b, matched, mismatch));
        }
    }
    let Some((lam0, b, _, mismatch)) = best else {
        report.checks.push(IdentityCheck::fail("b_coefficients", format!("no {root_deg}-th root of {target} in the coefficient ring")));
        return Ok(report);
    };
    report.checks.push(IdentityCheck::pass("eigen_residual"));
    report.checks.push(match mismatch {
        None => IdentityCheck::pass("b_coefficients").with_note(format!("{} coefficients compared", compared.len())),
        Some((i, expected, found)) => IdentityCheck::fail_at("b_coefficients", i, &expected, &found),
    });
    report.branch = Some(lam0.clone());
    report.recovered_b = b[..limit.max(0) as usize].to_vec();

    regular_checks(&mut report, kind, input, output, &a, &lam0, &out_b)?;

    let needs_reverse = kind == TransformKind::InfToZero || (kind == TransformKind::InfToInf && s < 2 * r);
    if needs_reverse {
        report.checks.push(reverse_check(kind, input, output, prec, &ring)?);
    }
    Ok(report)
}

/// Eigenvalue and shift-system checks, one twisted lift per input block.
fn regular_checks(
    report: &mut OracleReport,
    kind: TransformKind,
    input: &ConnectionPiece,
    output: &ConnectionPiece,
    a: &[Coeff],
    lam0: &Coeff,
    out_b: &crate::series::TruncSeries,
) -> Result<(), OracleError> {
    let (r, s) = (input.ram(), input.pole_order());
    let su = s as usize;
    let n = kind.output_ram(r, s);
    let half_s = Coeff::ratio(s as i64, 2);
    let direct_system = kind == TransformKind::ZeroToInf || (kind == TransformKind::InfToInf && s >= 2 * r);

    let mut predicted = Vec::new();
    let mut system = IdentityCheck::pass("shift_system");
    for block in input.regular().blocks() {
        let mut tw = a[..=su].to_vec();
        tw[su] = &tw[su] - &block.eigenvalue.scale(&num_rational::BigRational::new(1.into(), (r as i64).into()));
        let model = Model::new(kind, r, s, &tw)?;
        let lift = hensel_lift_eigen(&model.d, lam0, su + 1)?;
        let bs = model.symbol_from(&lift)?[su].clone();
        let c_out = &(&bs * &Coeff::from_int(-(n as i64))) + &half_s;
        predicted.push((c_out, block.size));

        if direct_system && system.passed() {
            let mut alphas: Vec<Coeff> = (0..su).map(|i| out_b.coeff(i as i64).unwrap_or_default()).collect();
            let ok = if kind == TransformKind::ZeroToInf {
                alphas.push(&bs - &zero::shift_constant(r, s));
                zero::zero_to_inf_system(r, s, &tw, &alphas)?
            } else {
                alphas.push(&bs - &infinity::inf_shift_constant(r, s));
                infinity::inf_to_inf_system(&infinity::build_inf_matrices(r, s, &tw)?, &alphas)?
            };
            if !ok {
                system = IdentityCheck::fail("shift_system", format!("no solution with nonzero leading vector for eigenvalue {}", block.eigenvalue));
            }
        }
    }

    let mut unused: Vec<&crate::connection::JordanBlock> = output.regular().blocks().iter().collect();
    let mut eig = IdentityCheck::pass("eigenvalues");
    for (idx, (c, size)) in predicted.iter().enumerate() {
        match unused.iter().position(|b| b.size == *size && congruent_mod_integers(&b.eigenvalue, c)) {
            Some(p) => {
                unused.remove(p);
            }
            None => {
                let found = output.regular().blocks().get(idx).map(|b| b.eigenvalue.clone()).unwrap_or_default();
                eig = IdentityCheck::fail_at("eigenvalues", idx, c, &found).with_note(format!("no output block of size {size} congruent modulo integers"));
                break;
            }
        }
    }
    report.checks.push(eig);
    report.checks.push(if direct_system {
        system
    } else {
        IdentityCheck::skipped("shift_system", "covered by the reverse check")
    });
    Ok(())
}

/// Checks that transforming the output back gives the pullback of the input
/// along `t ↦ -t`.
fn reverse_check(kind: TransformKind, input: &ConnectionPiece, output: &ConnectionPiece, prec: usize, ring: &CoeffRing) -> Result<IdentityCheck, OracleError> {
    let r = input.ram();
    if negation_root(ring, r).is_none() {
        return Ok(IdentityCheck::skipped("reverse", format!("coefficient ring has no {r}-th root of -1")));
    }
    let target = input.pullback_negate(ring)?;
    let back = match kind {
        TransformKind::InfToZero => TransformKind::ZeroToInf,
        _ => TransformKind::InfToInf,
    };
    let known = output.factor().alpha().prec() + output.pole_order() as i64;
    let nested = verify_with_known(back, output, &target, prec, ring, Some(known))?;
    Ok(match nested.first_failure() {
        None => IdentityCheck::pass("reverse").with_note(format!("{back} of the output matches the pulled-back input")),
        Some(f) => IdentityCheck::fail("reverse", format!("{back} of the output: {f}")),
    })
}
