use std::collections::BTreeMap;

use fxround::fxcore::ScaledValue;
use fxround::fxlinalg::{rounded_dot, rounded_matmul};
use fxround::{FxMatrix, QFormat, Rounder, RoundingMode, RngStream};
use num_rational::Ratio;
use proptest::prelude::*;

type Q = Ratio<i128>;

/// Probability of rounding down, straight from the definitions, for a value
/// measured in units of δ.
fn oracle_down(mode: RoundingMode, x: Q) -> Q {
    let fl = x.floor();
    let frac = x - fl;
    let one = Q::from_integer(1);
    match mode {
        RoundingMode::Floor => one,
        RoundingMode::Ceil => if frac == Q::from_integer(0) { one } else { Q::from_integer(0) },
        RoundingMode::NearestEven => {
            let half = Q::new(1, 2);
            if frac < half || (frac == half && fl.to_integer() % 2 == 0) {
                one
            } else {
                Q::from_integer(0)
            }
        }
        RoundingMode::Csr => one - frac,
        RoundingMode::Rr => Q::new(1, 2),
    }
}

/// Distribution of `R(x)` according to the library, keyed by mantissa.
fn library_law(mode: RoundingMode, x: Q) -> BTreeMap<i128, Q> {
    let v = ScaledValue::from_ratio(*x.numer(), *x.denom() as u128);
    v.outcomes(mode)
        .into_iter()
        .map(|(m, (n, d))| (m, Q::new(n as i128, d as i128)))
        .collect()
}

fn dyadic() -> impl Strategy<Value = Q> {
    (-2000i128..2000, 0u32..8).prop_map(|(k, j)| Q::new(k, 1 << j))
}

fn mantissas(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3000i64..3000, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn rounding_law_matches_definition(x in dyadic()) {
        for mode in RoundingMode::ALL {
            let law = library_law(mode, x);
            let fl = x.floor().to_integer();
            let down = oracle_down(mode, x);
            let one = Q::from_integer(1);
            prop_assert_eq!(law.get(&fl).copied().unwrap_or_default(), down);
            prop_assert_eq!(law.get(&(fl + 1)).copied().unwrap_or_default(), one - down);
            prop_assert_eq!(law.values().copied().sum::<Q>(), one);
        }
    }

    #[test]
    fn dot_rounds_the_exact_quotient(
        (x, y) in (1usize..40).prop_flat_map(|n| (mantissas(n), mantissas(n))),
        divisor in 1u64..300,
    ) {
        let fmt = QFormat::new(32, 8).unwrap();
        // exact value in units of δ: Σxy / (divisor · 2^f)
        let s: i128 = x.iter().zip(&y).map(|(&a, &b)| a as i128 * b as i128).sum();
        let exact = Q::new(s, divisor as i128 * 256);
        let mut fl = Rounder::new(fmt, RoundingMode::Floor, RngStream::new(0));
        let mut ce = Rounder::new(fmt, RoundingMode::Ceil, RngStream::new(0));
        prop_assert_eq!(rounded_dot(&x, &y, divisor, &mut fl).unwrap().mantissa() as i128, exact.floor().to_integer());
        prop_assert_eq!(rounded_dot(&x, &y, divisor, &mut ce).unwrap().mantissa() as i128, exact.ceil().to_integer());
    }

    #[test]
    fn one_draw_per_stochastic_dot(x in mantissas(17), y in mantissas(17), seed in any::<u64>()) {
        let fmt = QFormat::new(40, 8).unwrap();
        for mode in RoundingMode::ALL {
            let mut r = Rounder::new(fmt, mode, RngStream::new(seed));
            rounded_dot(&x, &y, 5, &mut r).unwrap();
            prop_assert_eq!(r.rng().draws(), u64::from(mode.is_stochastic()));
        }
    }

    #[test]
    fn matmul_draws_once_per_entry(a in mantissas(6), b in mantissas(12)) {
        let fmt = QFormat::new(40, 8).unwrap();
        let a = FxMatrix::from_mantissas(2, 3, a, fmt).unwrap();
        let b = FxMatrix::from_mantissas(3, 4, b, fmt).unwrap();
        let mut r = Rounder::new(fmt, RoundingMode::Rr, RngStream::new(1));
        rounded_matmul(&a, &b, &mut r).unwrap();
        prop_assert_eq!(r.rng().draws(), 8);
    }

    #[test]
    fn term_order_never_matters(x in mantissas(25), y in mantissas(25), seed in any::<u64>(), rot in 0usize..25) {
        let fmt = QFormat::new(40, 8).unwrap();
        let (mut xp, mut yp) = (x.clone(), y.clone());
        xp.rotate_left(rot);
        yp.rotate_left(rot);
        xp.reverse();
        yp.reverse();
        for mode in RoundingMode::ALL {
            let mut r1 = Rounder::new(fmt, mode, RngStream::new(seed));
            let mut r2 = Rounder::new(fmt, mode, RngStream::new(seed));
            prop_assert_eq!(
                rounded_dot(&x, &y, 25, &mut r1).unwrap(),
                rounded_dot(&xp, &yp, 25, &mut r2).unwrap()
            );
        }
    }

    #[test]
    fn sequential_round_add_equals_sum_of_rounded(xs in prop::collection::vec(dyadic(), 2..=3)) {
        for mode in [RoundingMode::Csr, RoundingMode::Rr] {
            // R(..R(R(x1) + x2).. + xn)
            let mut seq: BTreeMap<i128, Q> = library_law(mode, xs[0]);
            for &x in &xs[1..] {
                let mut next = BTreeMap::new();
                for (&g, &p) in &seq {
                    for (m, q) in library_law(mode, Q::from_integer(g) + x) {
                        *next.entry(m).or_insert_with(Q::default) += p * q;
                    }
                }
                seq = next;
            }
            // R(x1) + ... + R(xn)
            let mut sum: BTreeMap<i128, Q> = BTreeMap::from([(0, Q::from_integer(1))]);
            for &x in &xs {
                let mut next = BTreeMap::new();
                for (&s, &p) in &sum {
                    for (m, q) in library_law(mode, x) {
                        *next.entry(s + m).or_insert_with(Q::default) += p * q;
                    }
                }
                sum = next;
            }
            prop_assert_eq!(seq, sum);
        }
    }

    #[test]
    fn rounding_never_leaves_the_format(x in -1e6f64..1e6, seed in any::<u64>()) {
        let fmt = QFormat::Q16_8;
        for mode in RoundingMode::ALL {
            let r = fxround::round_value(x, fmt, mode, &mut RngStream::new(seed));
            prop_assert!(r.value.to_f64() <= fmt.max_value() && r.value.to_f64() >= fmt.min_value());
            if x > fmt.max_value() + fmt.precision() || x < fmt.min_value() - fmt.precision() {
                prop_assert!(r.saturated);
            }
            if x >= fmt.min_value() && x < fmt.max_value() - fmt.precision() {
                prop_assert!(!r.saturated);
            }
        }
    }
}
