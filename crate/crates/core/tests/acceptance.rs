//! Acceptance suite: one line per criterion, exact tolerances.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use lft_core::coeff::{Coeff, CoeffRing};
use lft_core::connection::{ConnectionPiece, ExponentialFactor, JordanBlock, RegularPart};
use lft_core::oracle::infinity::{build_inf_matrices, conjugation_checks, product_defect, shift_identity_inf_to_inf};
use lft_core::oracle::matrix::CoeffMatrix;
use lft_core::oracle::zero::{build_gamma, operator_matrix, shift_identity_zero_to_inf};
use lft_core::oracle::{verify_piece, CheckStatus};
use lft_core::series::TruncSeries;
use lft_core::transform::{reduced_solve, solve_piece, Branch, TransformKind};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

/// Wall-clock budget for the coefficient ratio laws.
const RATIO_BUDGET: Duration = Duration::from_secs(10);
/// Wall-clock budget for the dual-path agreement.
const DUAL_PATH_BUDGET: Duration = Duration::from_secs(30);
const RATIO_INSTANCES: usize = 50;
const VANISHING_INSTANCES: usize = 30;
const DUAL_PATH_INSTANCES: usize = 20;
const DUAL_PATH_PREC: usize = 12;
const COMPOSITION_INSTANCES: usize = 10;
const PROPERTY_CASES: usize = 100;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

/// Transform instances collected for the bookkeeping criterion.
#[derive(Default)]
struct Instances {
    seen: Vec<(TransformKind, ConnectionPiece, ConnectionPiece)>,
}

fn rat(n: i64, d: i64) -> Coeff {
    Coeff::ratio(n, d)
}

fn small(rng: &mut ChaCha8Rng) -> Coeff {
    rat(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

fn nonzero(rng: &mut ChaCha8Rng) -> Coeff {
    let n = rng.gen_range(1..=6) * if rng.gen_bool(0.5) { 1 } else { -1 };
    rat(n, rng.gen_range(1..=4))
}

/// A branch value with small height, so powers stay readable.
fn branch_value(rng: &mut ChaCha8Rng) -> Coeff {
    let choices = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2), (3, 2), (3, 1)];
    let (n, d) = *choices.choose(rng).unwrap();
    rat(n, d)
}

fn regular(rng: &mut ChaCha8Rng) -> RegularPart {
    let count = rng.gen_range(1..=2);
    RegularPart::new((0..count).map(|_| JordanBlock::new(small(rng), rng.gen_range(1..=2))).collect()).unwrap()
}

/// A piece whose transform has the rational branch `w`: the leading term is
/// chosen so that the branch equation reads `w^n = ±a_0`.
fn piece_with_branch(rng: &mut ChaCha8Rng, kind: TransformKind, r: u32, s: u32, w: &Coeff) -> ConnectionPiece {
    let n = kind.output_ram(r, s);
    let a0 = match kind {
        TransformKind::ZeroToInf => w.pow(n),
        _ => -w.pow(n),
    };
    // a_0 = (s/r)·α_{-s}
    let lead = &a0 * &rat(r as i64, s as i64);
    let mut terms = vec![(-(s as i64), lead)];
    for e in -(s as i64) + 1..0 {
        if rng.gen_bool(0.6) {
            terms.push((e, small(rng)));
        }
    }
    let factor = ExponentialFactor::from_terms(kind.input_point(), r, terms).unwrap();
    ConnectionPiece::new(factor, regular(rng))
}

fn pairs(kind: TransformKind, max_sum: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for r in 1..max_sum {
        for s in 1..=max_sum - r {
            let ok = match kind {
                TransformKind::ZeroToInf => true,
                TransformKind::InfToZero => r > s,
                TransformKind::InfToInf => s > r,
            };
            if ok {
                out.push((r, s));
            }
        }
    }
    out
}

fn coeff_of(s: &TruncSeries, e: i64) -> Coeff {
    s.coeff(e).unwrap_or_default()
}

fn ratio_laws(_: &mut Instances) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut failures = Vec::new();
    let mut total = 0;
    for kind in TransformKind::ALL {
        let choices = pairs(kind, 9);
        for _ in 0..RATIO_INSTANCES {
            let (r, s) = *choices.choose(&mut rng).unwrap();
            let n = kind.output_ram(r, s);
            let w = branch_value(&mut rng);
            let mut a = vec![match kind {
                TransformKind::ZeroToInf => w.pow(n),
                _ => -w.pow(n),
            }];
            for _ in 1..s {
                a.push(small(&mut rng));
            }
            a.push(nonzero(&mut rng));
            let a_s = a[s as usize].clone();
            let series = TruncSeries::new(1, 0, a, s as i64 + 1);
            let sol = reduced_solve(kind, r, s, &series, &Branch::Explicit(w)).unwrap();
            let expected = a_s.scale(&kind.coefficient_ratio(r, s));
            total += 1;
            if coeff_of(&sol.b, s as i64) != expected {
                failures.push(format!("{kind} r={r} s={s}"));
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        failures.is_empty() && elapsed < RATIO_BUDGET,
        format!("{}/{total} instances exact, {:.2}s (budget {}s) {}", total - failures.len(), elapsed.as_secs_f64(), RATIO_BUDGET.as_secs(), failures.join(", ")),
    )
}

fn genuine_vanishing(_: &mut Instances) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut bad = 0;
    for i in 0..VANISHING_INSTANCES {
        let kind = TransformKind::ALL[i % 3];
        let (r, s) = *pairs(kind, 8).choose(&mut rng).unwrap();
        let w = branch_value(&mut rng);
        let piece = piece_with_branch(&mut rng, kind, r, s, &w);
        let sol = solve_piece(kind, &piece, s as usize + 3, &Branch::default()).unwrap();
        if !coeff_of(&sol.b, s as i64).is_zero() {
            bad += 1;
        }
    }
    Outcome::new(bad == 0, format!("b_s = 0 on {}/{VANISHING_INSTANCES} instances", VANISHING_INSTANCES - bad))
}

fn worked_example(_: &mut Instances) -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let out = Command::new(env!("CARGO_BIN_EXE_lft"))
        .args(["transform", "--kind", "0-inf", "--prec", "8", "-i"])
        .arg(dir.join("worked_example.input.json"))
        .output()
        .expect("lft runs");
    let text = String::from_utf8(out.stdout).unwrap();
    let golden = std::fs::read_to_string(dir.join("worked_example.expected.json")).unwrap();
    let doc: Value = serde_json::from_str(&text).unwrap_or(Value::Null);

    // Hand solution: α = 4/t, t' = Y^{-2}; ∂_t α = -t' gives t^2 = 4Y^2, so
    // t = 2Y on the positive branch and β = 4/(2Y) + 2Y·Y^{-2} = 4/Y.
    let t1 = BigRational::from_integer(BigInt::from(2));
    let beta = BigRational::from_integer(BigInt::from(4)) / &t1 + &t1;
    let c = BigRational::new(BigInt::from(1), BigInt::from(2));
    let piece = &doc["pieces"][0];
    let derived = piece["point"] == "infinity"
        && piece["ram"] == 2
        && piece["alpha"]["-1"] == beta.to_string().as_str()
        && piece["alpha"].as_object().map(|a| a.len()) == Some(1)
        && piece["regular"][0]["c"] == c.to_string().as_str();
    Outcome::new(
        out.status.success() && text == golden && derived,
        format!("golden byte match: {}, hand values β = {beta}/Y, c = {c}: {derived}", text == golden),
    )
}

fn dual_path(instances: &mut Instances) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut agree = [0usize; 3];
    let mut controls = 0;
    let mut failures = Vec::new();
    let ring = CoeffRing::Rational;
    for (k, kind) in TransformKind::ALL.into_iter().enumerate() {
        let choices: Vec<(u32, u32)> = pairs(kind, 7).into_iter().filter(|(_, s)| (*s as usize) < DUAL_PATH_PREC).collect();
        for i in 0..DUAL_PATH_INSTANCES {
            let (r, s) = if kind == TransformKind::InfToInf {
                // alternate between the direct (s ≥ 2r) and reverse (s < 2r) routes
                let want_direct = i % 2 == 0;
                **choices.iter().filter(|(r, s)| (*s >= 2 * r) == want_direct).collect::<Vec<_>>().choose(&mut rng).unwrap()
            } else {
                *choices.choose(&mut rng).unwrap()
            };
            let w = branch_value(&mut rng);
            let piece = piece_with_branch(&mut rng, kind, r, s, &w);
            let sol = solve_piece(kind, &piece, DUAL_PATH_PREC, &Branch::Auto(ring.clone())).unwrap();
            let report = verify_piece(kind, &piece, &sol.piece, DUAL_PATH_PREC, &ring).unwrap();
            let transform_b: Vec<Coeff> = (0..DUAL_PATH_PREC as i64).map(|e| coeff_of(&sol.b, e)).collect();
            if report.passed() && report.recovered_b == transform_b {
                agree[k] += 1;
            } else {
                failures.push(format!("{kind} r={r} s={s}: {:?}", report.first_failure().map(|c| c.to_string())));
            }
            instances.seen.push((kind, piece.clone(), sol.piece.clone()));

            // negative control: bump one output coefficient b_j, j ≠ s
            let j = loop {
                let j = rng.gen_range(0..DUAL_PATH_PREC);
                if j != s as usize {
                    break j;
                }
            };
            let beta = sol.piece.factor().alpha();
            let bumped = beta.add(&TruncSeries::monomial(1, j as i64 - s as i64, Coeff::one(), beta.prec())).unwrap();
            let bad = ConnectionPiece::new(ExponentialFactor::new(kind.output_point(), sol.piece.ram(), bumped).unwrap(), sol.piece.regular().clone());
            let report = verify_piece(kind, &piece, &bad, DUAL_PATH_PREC, &ring).unwrap();
            let caught = report
                .check("b_coefficients")
                .is_some_and(|c| c.status == CheckStatus::Fail && c.mismatch.as_ref().is_some_and(|m| m.index == j));
            if caught {
                controls += 1;
            } else {
                failures.push(format!("{kind} r={r} s={s}: corrupted b_{j} not located"));
            }
        }
    }
    let elapsed = start.elapsed();
    let n = DUAL_PATH_INSTANCES;
    Outcome::new(
        failures.is_empty() && elapsed < DUAL_PATH_BUDGET,
        format!(
            "prec {DUAL_PATH_PREC}: Γ-path {}/{n}, companion path {}/{n}, Z'Λ^-1AΛ-path {}/{n}; corrupted coefficient located {controls}/{}; {:.2}s (budget {}s) {}",
            agree[0],
            agree[1],
            agree[2],
            3 * n,
            elapsed.as_secs_f64(),
            DUAL_PATH_BUDGET.as_secs(),
            failures.join("; ")
        ),
    )
}

fn matrix_identities(_: &mut Instances) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    let mut zero_cases = 0;
    let mut sparse_cases = 0;
    let mut general_cases = 0;
    for r in 1..8u32 {
        for s in 1..=8 - r {
            for _ in 0..2 {
                let mut a = vec![nonzero(&mut rng)];
                a.extend((0..s).map(|_| small(&mut rng)));
                let (ru, su) = (r as usize, s as usize);

                let m = operator_matrix(r, s, &a);
                let g = build_gamma(r, s, &a);
                let block = CoeffMatrix::from_fn(ru + su, ru + su, |i, j| {
                    if i < su && j == ru + i {
                        Coeff::one()
                    } else if i >= su && j == i - su {
                        a[0].clone()
                    } else {
                        Coeff::zero()
                    }
                });
                let mut char0 = vec![Coeff::zero(); ru + su + 1];
                char0[0] = -&a[0];
                char0[ru + su] = Coeff::one();
                if m.coeff_matrix(0) != block {
                    failures.push(format!("A_0 r={r} s={s}"));
                }
                if m != g.pow(r) {
                    failures.push(format!("Γ^r r={r} s={s}"));
                }
                if g.coeff_matrix(0).char_poly() != char0 {
                    failures.push(format!("char(Γ_0) r={r} s={s}"));
                }
                zero_cases += 1;

                if s > r {
                    let mats = build_inf_matrices(r, s, &a).unwrap();
                    if !conjugation_checks(&mats).passed() {
                        failures.push(format!("C identities r={r} s={s}"));
                    }
                    general_cases += 1;
                    let sparse_holds = product_defect(&mats) == mats.p
                        && &mats.c_prime.coeff_matrix(s as i64) - &mats.c.coeff_matrix(s as i64) == mats.expected_defect();
                    if s >= 2 * r {
                        sparse_cases += 1;
                        if !sparse_holds {
                            failures.push(format!("C'_s - C_s = diag - P r={r} s={s}"));
                        }
                    }
                }
            }
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!(
            "A_0 block form, ΣA_iZ'^i = Γ^r, char(Γ_0): {zero_cases} cases; C_i = C'_i (i < s) with exact defect: {general_cases} cases; \
             C'_s - C_s = diag - P: {sparse_cases} cases with s ≥ 2r {}",
            failures.join(", ")
        ),
    )
}

/// The sparse form of the defect, read for every s > r. It is false for
/// r < s < 2r with r ≥ 2: the -1/(a_0 Z') entry of A feeds extra terms
/// into C'_s. The exact defect is diag - Σ D_0^(i-1) B_i D_0^(r-i).
fn sparse_defect_all_slopes(_: &mut Instances) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut counterexamples = Vec::new();
    let mut cases = 0;
    for r in 1..8u32 {
        for s in r + 1..=8 - r {
            let mut a = vec![nonzero(&mut rng)];
            a.extend((0..s).map(|_| small(&mut rng)));
            let mats = build_inf_matrices(r, s, &a).unwrap();
            cases += 1;
            if &mats.c_prime.coeff_matrix(s as i64) - &mats.c.coeff_matrix(s as i64) != mats.expected_defect() {
                counterexamples.push(format!("({r},{s})"));
            }
        }
    }
    Outcome::new(
        counterexamples.is_empty(),
        format!("C'_s - C_s = diag - P with sparse P on {}/{cases} (r,s) pairs; fails at {}", cases - counterexamples.len(), counterexamples.join(" ")),
    )
}

fn shift_identities(_: &mut Instances) -> Outcome {
    let radicals = [(2, 1), (3, 1), (5, 1), (2, 3), (-3, 1), (7, 2)];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures = Vec::new();
    let (mut zero_cases, mut inf_cases) = (0, 0);
    for r in 1..=5u32 {
        for s in 1..=5u32 {
            let (n, d) = *radicals.choose(&mut rng).unwrap();
            let a0 = BigRational::new(BigInt::from(n), BigInt::from(d));
            let checks = shift_identity_zero_to_inf(r, s, &a0).unwrap();
            zero_cases += 1;
            if let Some(c) = checks.iter().find(|c| !c.passed()) {
                failures.push(format!("zero r={r} s={s}: {c}"));
            }
            if s >= 2 * r {
                let checks = shift_identity_inf_to_inf(r, s, &a0).unwrap();
                inf_cases += 1;
                if let Some(c) = checks.iter().find(|c| !c.passed()) {
                    failures.push(format!("infinity r={r} s={s}: {c}"));
                }
            }
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!(
            "ε_k(B - (2r+s)/(2r+2s))e_l = 0: {zero_cases} (r,s) pairs; ε'_k(C'_s - C_s - (s-2r)/(2s-2r))e'_l = 0: {inf_cases} pairs {}",
            failures.join("; ")
        ),
    )
}

fn compositions(instances: &mut Instances) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut ok = [0usize; 2];
    let mut failures = Vec::new();
    let routes: [(TransformKind, TransformKind, Vec<(u32, u32)>); 2] = [
        (TransformKind::InfToZero, TransformKind::ZeroToInf, (2..=5).flat_map(|r| (1..r).map(move |s| (r, s))).collect()),
        (TransformKind::InfToInf, TransformKind::InfToInf, (2..=5).flat_map(|r| (r + 1..2 * r).map(move |s| (r, s))).collect()),
    ];
    for (idx, (first, second, choices)) in routes.iter().enumerate() {
        for _ in 0..COMPOSITION_INSTANCES {
            let (r, s) = *choices.choose(&mut rng).unwrap();
            let ring = CoeffRing::cyclotomic(2 * r);
            let w = branch_value(&mut rng);
            let piece = piece_with_branch(&mut rng, *first, r, s, &w);
            let prec = s as usize + 1;
            let one = solve_piece(*first, &piece, prec, &Branch::Auto(ring.clone())).unwrap();
            let two = solve_piece(*second, &one.piece, prec, &Branch::Auto(ring.clone())).unwrap();
            let lhs = two.piece.canonicalize_in(&ring);
            let rhs = piece.pullback_negate(&ring).unwrap().canonicalize_in(&ring);
            if lhs == rhs {
                ok[idx] += 1;
            } else {
                failures.push(format!("{first} then {second} r={r} s={s}"));
            }
            instances.seen.push((*first, piece.clone(), one.piece.clone()));
            instances.seen.push((*second, one.piece.clone(), two.piece.clone()));
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!(
            "F(0,∞)∘F(∞,0) = [t ↦ -t]^*: {}/{COMPOSITION_INSTANCES}; F(∞,∞)∘F(∞,∞) (r < s < 2r) = [t ↦ -t]^*: {}/{COMPOSITION_INSTANCES} {}",
            ok[0],
            ok[1],
            failures.join(", ")
        ),
    )
}

fn branch_equivariance(_: &mut Instances) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let prec = 8;
    let mut failures = Vec::new();
    let mut compared = 0;
    for (r, s) in [(1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (3, 1)] {
        let n = r + s;
        let ring = CoeffRing::cyclotomic(n);
        let eps = ring.root_of_unity(n).unwrap();
        let w = branch_value(&mut rng);
        let piece = piece_with_branch(&mut rng, TransformKind::ZeroToInf, r, s, &w);
        let base = solve_piece(TransformKind::ZeroToInf, &piece, prec, &Branch::Explicit(w.clone())).unwrap();
        for k in 1..n {
            let ek = eps.pow(k);
            let other = solve_piece(TransformKind::ZeroToInf, &piece, prec, &Branch::Explicit(&w * &ek)).unwrap();
            // β coefficient at exponent j picks up ε^j; in the normalized
            // index i = j + s that is ε^(i-s) = ε^(i+r).
            for e in base.beta.low()..base.beta.prec() {
                compared += 1;
                let expected = &coeff_of(&base.beta, e) * &ek.powi(e).unwrap();
                if coeff_of(&other.beta, e) != expected {
                    failures.push(format!("β r={r} s={s} k={k} exponent {e}"));
                }
            }
            for i in 0..prec as i64 {
                compared += 1;
                let expected = &coeff_of(&base.b, i) * &ek.powi(i + r as i64).unwrap();
                if coeff_of(&other.b, i) != expected {
                    failures.push(format!("b r={r} s={s} k={k} i={i}"));
                }
            }
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!("β_j ↦ ε^j·β_j and b_i ↦ ε^(i+r)·b_i over r+s ∈ {{2,3,4}}: {compared} coefficients exact {}", failures.join(", ")),
    )
}

fn random_series(rng: &mut ChaCha8Rng, low: i64, max_len: usize) -> TruncSeries {
    let len = rng.gen_range(1..=max_len);
    let mut coeffs = vec![nonzero(rng)];
    coeffs.extend((1..len).map(|_| small(rng)));
    TruncSeries::new(1, low, coeffs, low + len as i64)
}

fn agree_below(x: &TruncSeries, y: &TruncSeries, prec: i64) -> bool {
    (x.low().min(y.low())..prec).all(|e| coeff_of(x, e) == coeff_of(y, e))
}

fn series_properties(_: &mut Instances) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut passed = [0usize; 4];
    for _ in 0..PROPERTY_CASES {
        // solve_branch: w^n = u(Y·w)
        let n = rng.gen_range(1..=4u32);
        let w0 = nonzero(&mut rng);
        let mut u = random_series(&mut rng, 0, 7);
        u = u.add(&TruncSeries::constant(&w0.pow(n) - &coeff_of(&u, 0), u.prec())).unwrap();
        let w = TruncSeries::solve_branch(&u, n, &w0).unwrap();
        if agree_below(&w.pow(n as i64).unwrap(), &u.compose(&w.shift(1)).unwrap(), u.prec()) {
            passed[0] += 1;
        }

        // invert_unit
        let f = { let low = rng.gen_range(-3..=3); random_series(&mut rng, low, 7) };
        let one = f.mul(&f.invert_unit().unwrap()).unwrap();
        if one.prec() == f.relative_prec() && agree_below(&one, &TruncSeries::constant(Coeff::one(), one.prec()), one.prec()) {
            passed[1] += 1;
        }

        // compose against term-by-term expansion Σ f_k g^k
        let f = random_series(&mut rng, 0, 8);
        let g = { let low = rng.gen_range(1..=2); random_series(&mut rng, low, 5) };
        let h = f.compose(&g).unwrap();
        let exact_g = TruncSeries::from_terms(1, g.terms().map(|(e, c)| (e, c.clone())), 64);
        let mut brute = TruncSeries::zero(1, 64);
        let mut power = TruncSeries::constant(Coeff::one(), 64);
        for k in 0..f.prec() {
            brute = brute.add(&power.scale(&coeff_of(&f, k))).unwrap();
            power = power.mul(&exact_g).unwrap().truncate(64);
        }
        if agree_below(&h, &brute, h.prec()) {
            passed[2] += 1;
        }

        // Leibniz rule
        let f = { let low = rng.gen_range(-3..=3); random_series(&mut rng, low, 7) };
        let g = { let low = rng.gen_range(-3..=3); random_series(&mut rng, low, 7) };
        let lhs = f.mul(&g).unwrap().differentiate();
        let rhs = f.differentiate().mul(&g).unwrap().add(&f.mul(&g.differentiate()).unwrap()).unwrap();
        if agree_below(&lhs, &rhs, lhs.prec().min(rhs.prec())) {
            passed[3] += 1;
        }
    }
    Outcome::new(
        passed.iter().all(|&p| p == PROPERTY_CASES),
        format!(
            "solve_branch residual {}/{PROPERTY_CASES}, invert_unit {}/{PROPERTY_CASES}, compose vs expansion {}/{PROPERTY_CASES}, Leibniz {}/{PROPERTY_CASES}",
            passed[0], passed[1], passed[2], passed[3]
        ),
    )
}

fn bookkeeping(instances: &mut Instances) -> Outcome {
    let mut bad = Vec::new();
    for (kind, input, output) in &instances.seen {
        let (r, s) = (input.ram(), input.pole_order());
        let n = kind.output_ram(r, s);
        let dim = input.regular().dim() as u64;
        let inv = output.invariants();
        let ok = output.point() == kind.output_point()
            && output.ram() == n
            && inv.slope == BigRational::new(BigInt::from(s), BigInt::from(n))
            && inv.rank == n as u64 * dim
            && inv.irregularity == s as u64 * dim;
        if !ok {
            bad.push(format!("{kind} r={r} s={s}"));
        }
    }
    let total = instances.seen.len();
    Outcome::new(
        bad.is_empty() && total > 0,
        format!("slope s/n, rank n·dim R, irregularity s·dim R on {}/{total} transform instances {}", total - bad.len(), bad.join(", ")),
    )
}

/// Criteria that are implemented as stated and known to be false.
const DOCUMENTED_FAILURES: &[&str] = &["5b"];

fn main() {
    let criteria: [(&str, &str, fn(&mut Instances) -> Outcome); 11] = [
        ("1", "coefficient ratio laws", ratio_laws),
        ("2", "genuine exponential data gives b_s = 0", genuine_vanishing),
        ("3", "worked example golden", worked_example),
        ("4", "dual-path oracle agreement", dual_path),
        ("5", "matrix identity suite", matrix_identities),
        ("5b", "sparse defect for every s > r", sparse_defect_all_slopes),
        ("6", "shift-constant identities", shift_identities),
        ("7", "composition round-trips", compositions),
        ("8", "branch equivariance", branch_equivariance),
        ("9", "series property suites", series_properties),
        ("10", "output bookkeeping", bookkeeping),
    ];
    let mut instances = Instances::default();
    let (mut passed, mut documented, mut failed) = (0, 0, 0);
    for (id, name, run) in criteria {
        let start = Instant::now();
        let outcome = run(&mut instances);
        let known = DOCUMENTED_FAILURES.contains(&id);
        let tag = match (outcome.pass, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (documented)",
            (false, false) => "FAIL",
        };
        println!("[{tag}] {id:>2}. {name} ({:.2}s): {}", start.elapsed().as_secs_f64(), outcome.detail.trim_end());
        match (outcome.pass, known) {
            (true, _) => passed += 1,
            (false, true) => documented += 1,
            (false, false) => failed += 1,
        }
    }
    println!(
        "acceptance: {passed}/{} criteria passed, {documented} documented failure(s), {failed} unexpected failure(s) (tolerance: exact equality)",
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
