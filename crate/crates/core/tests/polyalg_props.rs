use proptest::prelude::*;
use runlaw::polyalg::{format_sci, parse_rational, rat, rat_equal, to_f64, Poly, RatFun, Rational, WPoly};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn small_poly() -> impl Strategy<Value = Poly<Rational>> {
    prop::collection::vec(small_rational(), 0..5).prop_map(Poly::new)
}

fn small_wpoly() -> impl Strategy<Value = Poly<WPoly>> {
    prop::collection::vec(prop::collection::vec(small_rational(), 0..3).prop_map(WPoly::new), 0..4).prop_map(Poly::new)
}

/// Denominator with a nonzero constant term.
fn power_series_den() -> impl Strategy<Value = Poly<Rational>> {
    (small_rational().prop_filter("nonzero", |c| *c != rat(0, 1)), prop::collection::vec(small_rational(), 0..3))
        .prop_map(|(c0, rest)| {
            let mut v = vec![c0];
            v.extend(rest);
            Poly::new(v)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a - &a, Poly::zero());
        if !a.is_zero() && !b.is_zero() {
            prop_assert_eq!((&a * &b).degree(), Some(a.degree().unwrap() + b.degree().unwrap()));
        }
    }

    #[test]
    fn bivariate_ring_axioms(a in small_wpoly(), b in small_wpoly(), c in small_wpoly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn series_reconstructs_numerator(num in small_poly(), den in power_series_den()) {
        let f = RatFun::new(num.clone(), den.clone()).unwrap();
        let n = 8;
        let c = f.series(n).unwrap();
        let prod = &Poly::new(c) * &den;
        for i in 0..=n {
            prop_assert_eq!(prod.coeff(i), num.coeff(i));
        }
    }

    #[test]
    fn canonical_forms_are_structural(num in small_poly(), den in power_series_den(), k in power_series_den()) {
        let f = RatFun::new(num.clone(), den.clone()).unwrap();
        let g = RatFun::new(&num * &k, &den * &k).unwrap();
        prop_assert!(rat_equal(&f, &g));
        prop_assert_eq!(&f, &g);
        let h = RatFun::new(num.scale_by(&rat(-3, 7)), den.scale_by(&rat(-3, 7))).unwrap();
        prop_assert_eq!(f, h);
    }

    #[test]
    fn derivative_matches_finite_differences(num in small_poly(), den in power_series_den(), x in (-4i64..=4)) {
        let f = RatFun::new(num, den).unwrap();
        let x0 = rat(x, 8);
        prop_assume!(f.den().eval(&x0) != rat(0, 1));
        let exact = f.derivative().eval(&x0).unwrap();
        // symmetric differences have O(h²) error: halving h quarters it
        let diff = |h: &Rational| -> Option<Rational> {
            let hi = f.eval(&(&x0 + h)).ok()?;
            let lo = f.eval(&(&x0 - h)).ok()?;
            Some((hi - lo) / (h * rat(2, 1)))
        };
        let (h1, h2) = (rat(1, 1000), rat(1, 2000));
        if let (Some(d1), Some(d2)) = (diff(&h1), diff(&h2)) {
            let e1 = to_f64(&(d1 - &exact)).abs();
            let e2 = to_f64(&(d2 - &exact)).abs();
            prop_assert!(e2 <= e1 / 3.0 + 1e-12, "errors {e1} then {e2}");
        }
    }

    #[test]
    fn derivative_exact_on_polynomials(p in small_poly(), x in small_rational()) {
        let d = p.derivative();
        let by_rule: Rational = p.coeffs().iter().enumerate().skip(1)
            .map(|(i, c)| c * rat(i as i64, 1) * num_traits::pow(x.clone(), i - 1)).sum();
        prop_assert_eq!(d.eval(&x), by_rule.clone());
        prop_assert_eq!(RatFun::from_poly(p).derivative().eval(&x).unwrap(), by_rule);
    }

    #[test]
    fn decimal_and_fraction_agree(n in 0u32..10_000) {
        let dec = parse_rational(&format!("{}.{:04}", n / 10_000, n % 10_000)).unwrap();
        prop_assert_eq!(dec, rat(n as i64, 10_000));
    }
}

#[test]
fn rat_equal_is_an_equivalence() {
    let a = RatFun::new(Poly::from_rationals([rat(0, 1), rat(1, 1), rat(-1, 1)]), Poly::one_minus(rat(1, 1))).unwrap();
    let b = RatFun::from_poly(Poly::x());
    let c = RatFun::new(Poly::from_rationals([rat(0, 1), rat(2, 1)]), Poly::constant(rat(2, 1))).unwrap();
    assert!(rat_equal(&a, &a));
    assert!(rat_equal(&a, &b) && rat_equal(&b, &a));
    assert!(rat_equal(&b, &c) && rat_equal(&a, &c));
}

#[test]
fn scientific_formatting_rounds_half_even() {
    assert_eq!(format_sci(&rat(125, 1000), 2), "1.2e-1");
    assert_eq!(format_sci(&rat(135, 1000), 2), "1.4e-1");
    assert_eq!(format_sci(&rat(-7, 3), 3), "-2.33e0");
}
