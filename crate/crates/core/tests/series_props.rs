use lft_core::coeff::Coeff;
use lft_core::series::TruncSeries;
use proptest::prelude::*;

fn small_coeff() -> impl Strategy<Value = Coeff> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Coeff::ratio(n, d))
}

fn nonzero_coeff() -> impl Strategy<Value = Coeff> {
    (1i64..=5, 1i64..=3, any::<bool>()).prop_map(|(n, d, neg)| Coeff::ratio(if neg { -n } else { n }, d))
}

/// A series with `len` stored coefficients starting at `low` and nonzero
/// leading coefficient.
fn series(low: std::ops::RangeInclusive<i64>, len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = TruncSeries> {
    (low, nonzero_coeff(), prop::collection::vec(small_coeff(), len)).prop_map(|(low, lead, rest)| {
        let mut coeffs = vec![lead];
        coeffs.extend(rest);
        let prec = low + coeffs.len() as i64;
        TruncSeries::new(1, low, coeffs, prec)
    })
}

/// Coefficients of an exact polynomial product, by schoolbook multiplication.
fn poly_mul(f: &[Coeff], g: &[Coeff]) -> Vec<Coeff> {
    let mut out = vec![Coeff::zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[i + j] += &(a * b);
        }
    }
    out
}

fn dense(s: &TruncSeries) -> Vec<Coeff> {
    (s.low()..s.prec()).map(|e| s.coeff(e).unwrap()).collect()
}

fn agree_below(x: &TruncSeries, y: &TruncSeries, prec: i64) -> bool {
    (x.low().min(y.low())..prec).all(|e| x.coeff(e).unwrap_or_default() == y.coeff(e).unwrap_or_default())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn solve_branch_residual_vanishes(
        w0 in nonzero_coeff(),
        n in 1u32..=4,
        tail in prop::collection::vec(small_coeff(), 0..=6),
    ) {
        let mut coeffs = vec![w0.pow(n)];
        coeffs.extend(tail);
        let prec = coeffs.len() as i64;
        let u = TruncSeries::new(1, 0, coeffs, prec);
        let w = TruncSeries::solve_branch(&u, n, &w0).unwrap();
        prop_assert_eq!(w.prec(), prec);
        let lhs = w.pow(n as i64).unwrap();
        let rhs = u.compose(&w.shift(1)).unwrap();
        prop_assert!(agree_below(&lhs, &rhs, prec), "w^n = {}, u(Yw) = {}", lhs, rhs);
    }

    #[test]
    fn invert_unit_is_inverse(f in series(-3..=3, 0..=6)) {
        let g = f.invert_unit().unwrap();
        let one = f.mul(&g).unwrap();
        let expected = TruncSeries::constant(Coeff::one(), one.prec());
        prop_assert_eq!(one.prec(), f.relative_prec());
        prop_assert!(agree_below(&one, &expected, one.prec()));
    }

    #[test]
    fn compose_matches_brute_force(f in series(0..=2, 0..=5), g in series(1..=2, 0..=4)) {
        let h = f.compose(&g).unwrap();
        // Σ f_k g^k with f, g taken as exact polynomials
        let gd: Vec<Coeff> = {
            let mut v = vec![Coeff::zero(); g.low() as usize];
            v.extend(dense(&g));
            v
        };
        let mut total = vec![Coeff::zero()];
        let mut power = vec![Coeff::one()];
        for e in 0..f.prec() {
            let fk = f.coeff(e).unwrap();
            if !fk.is_zero() {
                if total.len() < power.len() {
                    total.resize(power.len(), Coeff::zero());
                }
                for (t, p) in total.iter_mut().zip(&power) {
                    *t += &(&fk * p);
                }
            }
            power = poly_mul(&power, &gd);
        }
        for e in 0..h.prec() {
            let brute = total.get(e as usize).cloned().unwrap_or_default();
            prop_assert_eq!(h.coeff(e).unwrap(), brute, "exponent {}", e);
        }
    }

    #[test]
    fn leibniz_rule(f in series(-3..=3, 0..=6), g in series(-3..=3, 0..=6)) {
        let lhs = f.mul(&g).unwrap().differentiate();
        let rhs = f.differentiate().mul(&g).unwrap().add(&f.mul(&g.differentiate()).unwrap()).unwrap();
        let prec = lhs.prec().min(rhs.prec());
        prop_assert!(agree_below(&lhs, &rhs, prec));
    }
}
