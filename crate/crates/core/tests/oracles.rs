//! Independent oracles for the arithmetic, the prime engine and the
//! evaluators, plus property tests over random inputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use pipoly::expression::{eval_spec, family_spec, parse_spec};
use pipoly::inequality::{alternating_sum, Evaluator, Family};
use pipoly::numerics::{ExtFloat, E};
use pipoly::prime_engine::{count_primes_segmented, LucyTable, PrimeCounter};
use pipoly::scanner::{make_grid, refine_crossing, scan, GridKind};

fn to_rational(v: ExtFloat) -> BigRational {
    if v.is_zero() {
        return BigRational::zero();
    }
    let m = BigInt::from((v.mantissa() * 2f64.powi(52)) as u64) * BigInt::from(v.sign());
    let e = v.exponent2() - 52;
    let p = BigInt::from(1) << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(m * p)
    } else {
        BigRational::new(m, p)
    }
}

/// `|computed − exact| ≤ 10^-12 |exact|` in exact arithmetic.
fn close(computed: ExtFloat, exact: &BigRational) -> bool {
    let diff = (to_rational(computed) - exact).abs();
    diff * BigRational::from_integer(BigInt::from(1_000_000_000_000u64)) <= exact.abs()
}

fn ext_strategy() -> impl Strategy<Value = ExtFloat> {
    (any::<bool>(), 1.0f64..2.0, -1600i64..=1600)
        .prop_map(|(neg, m, e)| ExtFloat::from_parts(if neg { -1 } else { 1 }, m, e).unwrap())
}

/// Trial-division prime test, kept deliberately naive.
fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn naive_pi(n: u64) -> u64 {
    (2..=n).filter(|&k| is_prime(k)).count() as u64
}

fn naive_psi(n: u64) -> f64 {
    (2..=n)
        .filter_map(|k| {
            let p = (2..=k).find(|d| k % d == 0).unwrap();
            let mut m = k;
            while m % p == 0 {
                m /= p;
            }
            (m == 1).then(|| (p as f64).ln())
        })
        .sum()
}

#[test]
fn ext_examples() {
    let v = ExtFloat::from_f64(-2.5).unwrap();
    assert_eq!((v.sign(), v.mantissa(), v.exponent2()), (-1, 1.25, 1));
    assert!(ExtFloat::from_f64(f64::NAN).is_err());
    let big = ExtFloat::from_f64(2.0e200).unwrap();
    assert!(close(big * big, &(to_rational(big) * to_rational(big))));
    assert_eq!((big * big).to_scientific(2), "4.0e400");
    assert_eq!(ExtFloat::ONE.to_scientific(3), "1.00e0");
    assert_eq!(ExtFloat::ZERO.to_scientific(5), "0");
    assert_eq!(
        ExtFloat::from_u64(10).powi(27).unwrap().to_scientific(17),
        "1.0000000000000000e27"
    );
    let b = ExtFloat::from_f64(2.44e16).unwrap();
    let p = b.powi(27).unwrap();
    assert!(close(p, &num_traits::pow(to_rational(b), 27)));
    assert_eq!(p.log10_abs().floor(), 442.0);
    assert!(ExtFloat::ONE.checked_div(ExtFloat::ZERO).is_err());
}

#[test]
fn lucy_matches_trial_division() {
    for n in (0..3000).step_by(7).chain([10_007, 65_536]) {
        assert_eq!(LucyTable::new(n).count(), naive_pi(n), "n = {n}");
    }
}

#[test]
fn chebyshev_matches_trial_division() {
    let c = PrimeCounter::shared();
    for x in [2u64, 3, 4, 30, 97, 128, 1000, 2310, 4096] {
        let r = c.chebyshev(x).unwrap();
        assert!((r.psi - naive_psi(x)).abs() < 1e-9 * x as f64, "x = {x}");
        assert!(r.theta <= r.psi);
    }
}

/// `G` straight from its definition with naive π; close to the evaluator.
#[test]
fn g_against_naive_definition() {
    let ev = Evaluator::new(PrimeCounter::shared());
    for x in [100u64, 1234, 5000, 20_000] {
        let xf = x as f64;
        let p = naive_pi(x) as f64;
        let pe = naive_pi((xf / E).floor() as u64) as f64;
        let naive = p * p - E * xf / xf.ln() * pe;
        let v = ev.eval_g(xf).unwrap().value.to_f64();
        assert!(
            (v - naive).abs() <= 1e-9 * naive.abs().max(1.0),
            "x = {x}: {v} vs {naive}"
        );
    }
}

/// The last sign change of `G` below 10^4 is bracketed to width 1 and both
/// endpoints agree with the naive definition.
#[test]
fn g_crossing_refinement() {
    let ev = Evaluator::new(PrimeCounter::shared());
    let report = scan(&ev, &Family::G, 10.0, 10_000.0, 400, GridKind::Linear).unwrap();
    let &(lo, hi) = report.crossings.last().expect("G changes sign below 10^4");
    let c = refine_crossing(&ev, &Family::G, lo, hi, 1.0).unwrap();
    let naive_sign = |x: f64| {
        let v = (naive_pi(x as u64) as f64).powi(2)
            - E * x / x.ln() * naive_pi((x / E).floor() as u64) as f64;
        v.partial_cmp(&0.0).unwrap() as i8
    };
    match c.zero_at {
        Some(z) => assert_eq!(naive_sign(z), 0),
        None => {
            assert_eq!(c.hi - c.lo, 1.0);
            assert_eq!(naive_sign(c.lo), c.sign_lo);
            assert_eq!(naive_sign(c.hi), c.sign_hi);
            assert_ne!(c.sign_lo, c.sign_hi);
        }
    }
    let both_negative = refine_crossing(&ev, &Family::H, 1e4, 1e5, 1.0);
    assert!(both_negative.is_err());
}

#[test]
fn shipped_texts_have_expected_degrees() {
    let cases = [
        (Family::G, 2),
        (Family::H, 3),
        (Family::K, 4),
        (Family::L { n: 5 }, 2),
        (Family::F { n: 5 }, 2),
        (Family::Hn { n: 2 }, 9),
        (Family::Nr { n: 5, r: 4 }, 4),
    ];
    for (family, degree) in cases {
        assert_eq!(
            family_spec(&family).unwrap().degree(),
            degree,
            "{}",
            family.label()
        );
    }
}

#[test]
fn zero_spec_scan() {
    let spec = parse_spec("pi(x) - pi(x)").unwrap();
    let family = Family::General {
        spec: std::sync::Arc::new(spec),
        n: None,
    };
    let ev = Evaluator::new(PrimeCounter::shared());
    let r = scan(&ev, &family, 1e3, 1e6, 10, GridKind::Log).unwrap();
    assert!(r.signs.iter().all(|&s| s == 0));
    assert!(r.crossings.is_empty());
}

fn expr_strategy() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("x".to_string()),
        Just("e".to_string()),
        Just("gamma".to_string()),
        (1u32..1000).prop_map(|v| v.to_string()),
        (1u32..1000).prop_map(|v| format!("{}.5", v)),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} + {b}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) - ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a}*{b}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})/({b})")),
            (inner.clone(), 0u64..5).prop_map(|(a, k)| format!("({a})^{k}")),
            inner.clone().prop_map(|a| format!("-({a})")),
            inner.clone().prop_map(|a| format!("log({a})")),
            inner.clone().prop_map(|a| format!("pi({a})")),
            inner.prop_map(|a| format!("sum(k, 1, n, k*({a}))")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn mul_div_sub_against_rationals(a in ext_strategy(), b in ext_strategy()) {
        let (ra, rb) = (to_rational(a), to_rational(b));
        prop_assert!(close(a * b, &(&ra * &rb)));
        prop_assert!(close(a.checked_div(b).unwrap(), &(&ra / &rb)));
        prop_assert!(close(a - b, &(&ra - &rb)) || (a - b).is_zero() && ra == rb);
    }

    #[test]
    fn seventeen_digit_round_trip(a in ext_strategy()) {
        let back: ExtFloat = a.to_scientific(17).parse().unwrap();
        prop_assert!(back.rel_error(&a).unwrap() <= 1e-15);
    }

    #[test]
    fn ordering_matches_rationals(a in ext_strategy(), b in ext_strategy()) {
        prop_assert_eq!(a.cmp(&b), to_rational(a).cmp(&to_rational(b)));
    }

    #[test]
    fn sublinear_count_matches_sieve(n in 0u64..3_000_000) {
        prop_assert_eq!(LucyTable::new(n).count(), count_primes_segmented(n));
    }

    #[test]
    fn counter_memo_is_consistent(ns in proptest::collection::vec(10_000_000u64..60_000_000, 1..6)) {
        let c = PrimeCounter::shared();
        let batch = c.count_batch(&ns).unwrap();
        for (n, b) in ns.iter().zip(batch) {
            prop_assert_eq!(LucyTable::new(*n).count(), b);
        }
    }

    #[test]
    fn render_parse_round_trip(text in expr_strategy()) {
        let spec = parse_spec(&text).unwrap();
        let again = parse_spec(&spec.to_string()).unwrap();
        prop_assert_eq!(spec.to_string(), again.to_string());
        prop_assert_eq!(spec.degree(), again.degree());
    }

    #[test]
    fn family_eval_invariants(x in 1e3f64..1e9, n in 2u32..8, r in 2u32..5) {
        let ev = Evaluator::new(PrimeCounter::shared());
        for family in [Family::G, Family::H, Family::K, Family::L { n }, Family::F { n },
                       Family::Hn { n: n.min(4) }, Family::Nr { n, r }] {
            let e = ev.eval(&family, x.floor()).unwrap();
            prop_assert_eq!(e.sign, e.value.sign());
            prop_assert_eq!(alternating_sum(e.terms.iter().map(|t| t.1)), e.value);
            if let Some(spec) = family_spec(&family) {
                let dsl = eval_spec(&spec, &ev, x.floor(), family.n().map(u64::from)).unwrap();
                prop_assert_eq!(dsl, e.value);
            }
        }
    }

    #[test]
    fn grid_is_sorted_and_bounded(lo in 3.0f64..1e6, span in 1.0f64..1e6, points in 2usize..200,
                                  linear in any::<bool>()) {
        let kind = if linear { GridKind::Linear } else { GridKind::Log };
        let hi = lo + span;
        let g = make_grid(lo, hi, points, kind).unwrap();
        prop_assert!(g.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(g.iter().all(|&v| v >= lo.ceil() && v <= hi.floor() && v.fract() == 0.0));
        prop_assert!(g.len() <= points);
    }
}
