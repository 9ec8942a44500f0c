use modcurv::exact::{parse_expr, Assignment, Monomial, Var};
use modcurv::{GaussRational, Polynomial, RationalFunction};
use num_complex::Complex;
use num_traits::One;
use proptest::prelude::*;

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..2), -4i64..5), 1..5).prop_map(|terms| {
        Polynomial::from_terms(terms.into_iter().map(|((eu, es, em), c)| {
            (Monomial::from_exponents([eu, em, es, 0]), GaussRational::from(c))
        }))
    })
}

fn nonzero_poly() -> impl Strategy<Value = Polynomial> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfn() -> impl Strategy<Value = RationalFunction> {
    (poly(), nonzero_poly()).prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
}

fn at(u: f64, s4: f64, m: f64) -> Assignment<f64> {
    Assignment::new().with_real(Var::U, u).with_real(Var::S4, s4).with_real(Var::M, m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_laws(a in ratfn(), b in ratfn(), c in ratfn()) {
        prop_assert!((&(&a + &b) - &b).equals(&a));
        prop_assert!((&a * &b).equals(&(&b * &a)));
        prop_assert!((&a * &(&b + &c)).equals(&(&(&a * &b) + &(&a * &c))));
        prop_assert!((&(&a * &b) * &c).equals(&(&a * &(&b * &c))));
        if !b.is_zero() {
            prop_assert!((&a.checked_div(&b).unwrap() * &b).equals(&a));
        }
    }

    #[test]
    fn leibniz_and_quotient_rules(a in ratfn(), b in ratfn()) {
        let d = |f: &RationalFunction| f.differentiate(Var::U, 1);
        prop_assert!(d(&(&a * &b)).equals(&(&(&d(&a) * &b) + &(&a * &d(&b)))));
        if !b.is_zero() {
            let q = a.checked_div(&b).unwrap();
            let rhs = (&(&d(&a) * &b) - &(&a * &d(&b))).checked_div(&(&b * &b)).unwrap();
            prop_assert!(d(&q).equals(&rhs));
        }
        prop_assert!(a.differentiate(Var::U, 2).equals(&d(&d(&a))));
        prop_assert!(a.differentiate(Var::T4, 1).is_zero());
    }

    #[test]
    fn text_round_trips(a in ratfn()) {
        let canonical: RationalFunction = a.to_string().parse().unwrap();
        prop_assert_eq!(&canonical, &a);
        let pretty: RationalFunction = parse_expr(&a.pretty()).unwrap();
        prop_assert!(pretty.equals(&a));
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in ratfn(), b in ratfn(), u in 0.3f64..2.0, s4 in 0.3f64..2.0) {
        let p = at(u, s4, 6.0);
        let (Ok(x), Ok(y), Ok(xy), Ok(x_plus_y)) =
            (a.eval_numeric(&p), b.eval_numeric(&p), (&a * &b).eval_numeric(&p), (&a + &b).eval_numeric(&p))
        else {
            return Ok(());
        };
        let scale = 1.0 + x.norm() * y.norm() + x.norm() + y.norm();
        prop_assert!((xy - x * y).norm() < 1e-9 * scale);
        prop_assert!((x_plus_y - (x + y)).norm() < 1e-9 * scale);
    }

    #[test]
    fn substitution_commutes_with_evaluation(a in ratfn(), v in ratfn(), s4 in 0.3f64..2.0) {
        let Ok(sub) = a.substitute(Var::U, &v) else { return Ok(()) };
        let p = at(0.0, s4, 4.0);
        let (Ok(vu), Ok(direct)) = (v.eval_numeric(&p), sub.eval_numeric(&p)) else { return Ok(()) };
        let Ok(via) = a.eval_numeric(&p.with(Var::U, vu)) else { return Ok(()) };
        prop_assert!((direct - via).norm() < 1e-8 * (1.0 + via.norm()));
    }
}

#[test]
fn gaussian_rationals() {
    let i = GaussRational::i();
    assert_eq!(i.clone() * i.clone(), -GaussRational::one());
    assert_eq!(i.conj(), -i.clone());
    let z: GaussRational = "(1/2)+(3/4)i".parse().unwrap();
    assert_eq!(z.to_string().parse::<GaussRational>().unwrap(), z);
    assert!("1/2 + 3/4*i".parse::<GaussRational>().is_err());
    let f = RationalFunction::constant(i);
    assert!(!f.is_real());
    assert!((&f * &f).equals(&RationalFunction::integer(-1)));
}

#[test]
fn canonical_form_is_reduced() {
    let f = parse_expr::<GaussRational>("(s4^2 - 1)/(s4 - 1)").unwrap();
    assert_eq!(f, parse_expr("s4 + 1").unwrap());
    assert!(parse_expr::<GaussRational>("1/(u - u)").is_err());
    let z = RationalFunction::zero();
    assert!(z.recip().is_err());
    let p = parse_expr::<GaussRational>("1/(1 - u)").unwrap();
    let v = p.eval_numeric(&Assignment::new().with_real(Var::U, 1.0));
    assert!(v.is_err());
    let at = Assignment::new().with(Var::U, Complex::new(0.5f64, 0.0));
    assert!((p.eval_numeric(&at).unwrap().re - 2.0).abs() < 1e-15);
}
