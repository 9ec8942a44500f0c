use modcurv::curvature::*;
use modcurv::exact::{parse_expr, ratio, Var};
use modcurv::fixtures;
use modcurv::RationalFunction;

#[test]
fn listed_dimensions() {
    for m in [4u32, 6, 8] {
        let set = extract_dimension(m).unwrap();
        assert!(set.k_delta.equals(&fixtures::listed_k(m).unwrap()), "K{m} = {}", set.k_delta.pretty());
        assert!(set.h_delta.equals(&fixtures::listed_h(m).unwrap()), "H{m} = {}", set.h_delta.pretty());
    }
    let k4 = extract_dimension(4).unwrap().k_delta;
    assert_eq!(k4.pretty(), "-1/(2*s4^4)");
}

#[test]
fn factorial_normalization_contradicts_listing() {
    let set = extract_dimension(8).unwrap();
    let with_factorial = set.k_delta.scale(&2.into());
    assert!(!with_factorial.equals(&fixtures::listed_k(8).unwrap()));
}

#[test]
fn dirac_forms_and_reality() {
    for m in [4u32, 6, 8, 10, 12] {
        let set = extract_dimension(m).unwrap();
        assert!(set.k_delta.is_real() && set.h_delta.is_real());
        let ratio_k = set.k_dirac.checked_div(&set.k_delta).unwrap();
        assert!(ratio_k.equals(&RationalFunction::var(Var::S4)));
        let ratio_h = set.h_dirac.checked_div(&set.h_delta).unwrap();
        assert!(ratio_h.equals(&parse_expr("s4*t4").unwrap()));
        assert_eq!(set.scalar_coefficient(), -ratio(1, 12));
        assert_eq!(set.c_scal, expected_scalar_constant(m));
    }
}

#[test]
fn numeric_values() {
    let k4 = extract_dimension(4).unwrap();
    let at = modcurv::exact::Assignment::<f64>::new().with_s(4.0);
    assert!((k4.k_delta.eval_numeric(&at).unwrap().re + 0.125).abs() < 1e-15);
    let k6 = extract_dimension(6).unwrap();
    let at = modcurv::exact::Assignment::<f64>::new().with_s(1.0);
    assert!((k6.k_delta.eval_numeric(&at).unwrap().re + 5.0 / 3.0).abs() < 1e-14);
}

#[test]
fn relations_hold() {
    for m in [4u32, 6, 8, 10] {
        let rep = verify_relations(m, 100, 1e-10, 3).unwrap();
        assert!(rep.passed(), "{rep}");
    }
}

#[test]
fn limits_on_singular_loci() {
    let set = extract_dimension(4).unwrap();
    let lf = log_form(&set);
    let k0 = limit_eval(&lf.k, &[0.0], &[1.0]).unwrap();
    assert!((k0.value + 0.5).abs() < 1e-9, "{k0:?}");
    assert!((lf.k.eval(&[0.0]).unwrap() + 0.5).abs() < 1e-15);
    let h00 = limit_eval(&lf.h, &[0.0, 0.0], &[1.0, 0.5]).unwrap();
    assert!((h00.value - 0.5).abs() < 1e-9, "{h00:?}");
    let f = ModularExpr::Quotient(Box::new(s().exp() - cst(1.0)), Box::new(s()));
    let l = limit_eval(&f, &[0.0], &[1.0]).unwrap();
    assert!((l.value - 1.0).abs() < 1e-9);
    let eh = eh_functions(&set);
    assert!(matches!(eh.k_eh.eval(&[0.01]), Err(CurvatureError::SingularLocus { .. })));
    let keh0 = limit_eval(&eh.k_eh, &[0.0], &[1.0]).unwrap();
    let rhs0 = eh.relation_one_rhs().eval(&[0.0]).unwrap();
    assert!((keh0.value - rhs0).abs() < 1e-8, "{keh0:?} vs {rhs0}");
}

#[test]
fn samples_are_deterministic_and_admissible() {
    let a = sample_points(50, 9);
    assert_eq!(a, sample_points(50, 9));
    assert!(a.iter().all(|(s, t)| s.abs() >= 0.1 && t.abs() >= 0.1 && (s + t).abs() >= 0.1));
}

#[test]
fn dimension_four_displays() {
    let set = extract_dimension(4).unwrap();
    let eh = eh_functions(&set);
    for k in 1..60 {
        let u = -3.0 + 0.1 * k as f64 + 0.013;
        if u.abs() < 0.06 {
            continue;
        }
        let em = (-u).exp();
        let t_sum = (-2.0 * u - 4.0 * (-u / 2.0).exp() + 4.0) / (u * u)
            - em * (-(2.0 * u - 4.0 * (u / 2.0).exp() + 4.0) / (u * u) - u.exp_m1() / u)
            - (-u).exp_m1() / u;
        let keh = -8.0 * ((-0.75 * u).exp() - (-0.25 * u).exp()) * (u / 4.0).sinh() / (u * u);
        let got_sum = eh.t.eval(&[u]).unwrap() + eh.t_tilde.eval(&[u]).unwrap();
        assert!((got_sum + t_sum).abs() < 1e-9, "u={u} {got_sum} {t_sum}");
        assert!((eh.k_eh.eval(&[u]).unwrap() - keh).abs() < 1e-9, "u={u}");
        assert!((keh - t_sum).abs() < 1e-9);
        let closed = 4.0 * (-u).exp() * ((u / 2.0).exp() - 1.0).powi(2) / (u * u);
        assert!((keh - closed).abs() < 1e-9 * closed.abs().max(1.0));
    }
}
