//! Property suites against independent oracles.

use hfl::builtins;
use hfl::correlate::{round_value, segment_fold, weighted_avg, Rounder, RoundingMode};
use hfl::germ::{compare, Basis, GermTerm, GrowthComparison, HardyExpr, Interval, SymbolicReal, Weight};
use hfl::intersective::{roots_mod, IntPoly};
use hfl::patterns::BohrSet;
use hfl::uniformity::{gowers_seminorm, FiniteObservable};
use num_complex::Complex64;
use proptest::prelude::*;
use rug::{Float, Integer, Rational};

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// `(num/den) t`, so `f(1)` is any rational we like.
fn linear(num: i64, den: i64) -> HardyExpr {
    HardyExpr::monomial(q(num, den), 1)
}

fn floor_q(x: &Rational) -> Integer {
    x.clone().floor().numer().clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn rounding_identities(num in -1_000_000i64..1_000_000, den in 1i64..1000, n in 1u64..1000) {
        let b = Basis::new();
        let f = linear(num, den);
        let x = q(num, den) * Rational::from(n);
        let floor = round_value(&b, &f, n, RoundingMode::Floor).unwrap();
        prop_assert_eq!(Integer::from(floor), floor_q(&x));
        let ceil = round_value(&b, &f, n, RoundingMode::Ceil).unwrap();
        prop_assert_eq!(Integer::from(ceil), -floor_q(&Rational::from(-&x)));
        let half = Rational::from(&x + q(1, 2));
        if !half.is_integer() {
            let near = round_value(&b, &f, n, RoundingMode::Nearest).unwrap();
            prop_assert_eq!(Integer::from(near), floor_q(&half));
        }
    }

    #[test]
    fn certified_rounding_is_stable(p in 1i64..12, d in 1i64..6, c in 1i64..50, n in 2u64..1_000_000) {
        let b = Basis::new();
        let f = HardyExpr::new(&b, vec![GermTerm::power(q(c, 7), q(p, d)), GermTerm::power(q(-1, 3), q(1, 2))]).unwrap();
        let r = Rounder::new(&b, &f, RoundingMode::Floor).unwrap();
        let Ok(v) = r.round(n) else { return Ok(()) };
        let iv = f.eval(&b, &Interval::point_u64(4096, n)).unwrap();
        if let Some(fl) = iv.floor_certified() {
            prop_assert_eq!(Integer::from(v), fl);
        }
    }

    #[test]
    fn growth_comparison_is_antisymmetric(a in 0i64..8, b_ in 1i64..4, c in 0i64..8, d in 1i64..4, r in -2i64..3, s in -2i64..3) {
        let basis = Basis::new();
        let f = HardyExpr::new(&basis, vec![GermTerm::power(1, q(a, b_)).with_log(1, r)]).unwrap();
        let g = HardyExpr::new(&basis, vec![GermTerm::power(1, q(c, d)).with_log(1, s)]).unwrap();
        let fg = compare(&basis, &f, &g).unwrap();
        let gf = compare(&basis, &g, &f).unwrap();
        match fg {
            GrowthComparison::Precedes => prop_assert!(matches!(gf, GrowthComparison::Dominates)),
            GrowthComparison::Dominates => prop_assert!(matches!(gf, GrowthComparison::Precedes)),
            GrowthComparison::SameOrder(_) => prop_assert!(matches!(gf, GrowthComparison::SameOrder(_))),
        }
        let by_exponent = (q(a, b_), r).partial_cmp(&(q(c, d), s)).unwrap();
        let expect = match by_exponent {
            std::cmp::Ordering::Less => "precedes",
            std::cmp::Ordering::Greater => "dominates",
            std::cmp::Ordering::Equal => "same",
        };
        let got = match fg {
            GrowthComparison::Precedes => "precedes",
            GrowthComparison::Dominates => "dominates",
            GrowthComparison::SameOrder(_) => "same",
        };
        prop_assert_eq!(got, expect);
    }

    #[test]
    fn weighted_average_is_bounded(seed in 0u64..1000, grid_top in 10u64..5000, w in 0usize..4) {
        let b = Basis::new();
        let weight = Weight::ladder()[w].1.clone();
        let a = move |n: u64| Ok(((n.wrapping_mul(2654435761).wrapping_add(seed) % 1000) as f64 / 500.0) - 1.0);
        let grid = [grid_top / 3 + 1, grid_top + 1];
        let rep = weighted_avg(&b, a, &weight, &grid, 2).unwrap();
        for p in rep.points {
            prop_assert!(p.weighted_average.abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn segment_fold_ignores_thread_count(top in 1u64..300_000, k in 1usize..4) {
        let grid: Vec<u64> = (1..=k as u64).map(|i| top * i).collect();
        let run = |threads| segment_fold(
            &grid,
            threads,
            || 0.0f64,
            |acc, n| {
                *acc += (n as f64).sqrt().sin();
                Ok(())
            },
            |a, b| *a += b,
            |a| a.to_bits(),
        ).unwrap();
        let one = run(1);
        prop_assert_eq!(&one, &run(3));
        prop_assert_eq!(&one, &run(8));
    }

    #[test]
    fn seminorm_is_homogeneous(vals in proptest::collection::vec(-1.0f64..1.0, 1..12), c in 0.0f64..3.0, s in 1u32..4) {
        let h = FiniteObservable::real(&vals, 1).unwrap();
        let scaled = h.scale(Complex64::new(c, 0.0));
        prop_assert!((gowers_seminorm(&scaled, s) - c * gowers_seminorm(&h, s)).abs() <= 1e-9);
    }

    #[test]
    fn roots_are_roots(c in proptest::collection::vec(-30i64..30, 1..6), m in 1u64..300) {
        let p = IntPoly::from_i64(&c);
        for r in roots_mod(&p, m) {
            prop_assert_eq!(p.eval_mod(r, m), 0);
        }
    }
}

#[test]
fn bohr_membership_matches_high_precision() {
    let mut b = Basis::new();
    builtins::declare_builtin(&mut b, "a", "golden").unwrap();
    let set = BohrSet::new(&b, vec![SymbolicReal::symbol("a")], vec![(q(1, 5), q(1, 3))]).unwrap();
    let a = Float::with_val(2000, Float::parse(builtins::constant_value("golden").unwrap()).unwrap());
    for n in 1..20_000u64 {
        let x = Float::with_val(2000, &a * n);
        let frac = Float::with_val(2000, &x - x.clone().floor());
        let inside = frac >= q(1, 5) && frac < q(1, 3);
        assert_eq!(set.contains(n).unwrap(), inside, "n = {n}");
    }
}
