use modcurv::cosphere::{IntegratedTerm, OutputKind};
use modcurv::exact::{parse_expr, ratio, Var};
use modcurv::fixtures;
use modcurv::rearrange::*;
use modcurv::symcalc::{Atom, AtomKind};
use modcurv::RationalFunction;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn word(spec: &str) -> Vec<Atom> {
    spec.split_whitespace()
        .map(|w| match w {
            "K" => Atom::scalar(AtomKind::K),
            "B0" => Atom::scalar(AtomKind::B0),
            "GradK" => Atom::new(AtomKind::GradK, &[0]),
            "Grad2K" => Atom::new(AtomKind::Grad2K, &[0, 0]),
            _ => panic!("{w}"),
        })
        .collect()
}

fn term(coeff: i64, xi2_power: u32, spec: &str, kind: OutputKind) -> IntegratedTerm {
    IntegratedTerm { coeff: RationalFunction::integer(coeff), xi2_power, word: word(spec), kind }
}

#[test]
fn masters_match_reference() {
    let ms = derive_masters().unwrap();
    assert!(ms.f.equals(&fixtures::master_f()), "F = {}", ms.f.pretty());
    assert!(ms.g.equals(&fixtures::master_g()), "G = {}", ms.g.pretty());
    assert!(ms.f.is_real() && ms.g.is_real());
    for c in &ms.canonical {
        c.check_homogeneity().unwrap();
        let expected = match c.kind {
            OutputKind::Hess => 1,
            OutputKind::GradGrad | OutputKind::GradSq => 0,
            OutputKind::ScalTerm => 2,
        };
        assert_eq!(c.global_k_offset(), expected);
    }
}

#[test]
fn hessian_example() {
    let t = term(-1, 1, "K K K B0 B0 Grad2K B0", OutputKind::Hess);
    let c = normal_order(&t);
    assert_eq!((c.b0_exponents.as_slice(), c.halfweights.as_slice()), (&[2, 1][..], &[0][..]));
    let f = to_spectral(&c).unwrap();
    assert_eq!(f.basis, Basis::K { p: 2, q: 1 });
    assert_eq!(f.prefactor, RationalFunction::integer(-1));
}

#[test]
fn gradient_pair_example() {
    let t = term(-1, 1, "K B0 GradK B0 GradK K B0", OutputKind::GradGrad);
    let c = normal_order(&t);
    assert_eq!(c.halfweights, [1, 1]);
    let f = to_spectral(&c).unwrap();
    assert_eq!(f.basis, Basis::H { p: 1, q: 1, l: 1 });
    assert_eq!(f.prefactor, parse_expr("-s4^2*t4^2").unwrap());
}

#[test]
fn scalar_example() {
    let c = normal_order(&term(1, 0, "K K B0 B0", OutputKind::ScalTerm));
    assert_eq!(to_spectral(&c).unwrap().basis, Basis::C { p: 2 });
}

#[test]
fn homogeneity_violation_is_reported() {
    let c = normal_order(&term(1, 2, "K K B0 B0", OutputKind::ScalTerm));
    assert!(matches!(to_spectral(&c), Err(RearrangeError::HomogeneityViolation { .. })));
}

#[test]
fn constants() {
    assert_eq!(constant_c(2, 4), BigRational::from_integer(1.into()));
    assert_eq!(constant_c(3, 4), BigRational::from_integer(1.into()));
    let ms = derive_masters().unwrap();
    for m in [4u32, 6, 8, 10, 12] {
        let direct = -ratio(1, 4) * constant_c(2, m) + constant_c(3, m) * ratio(2, 3 * m as i64);
        let gamma = BigRational::from_integer(gamma_half(m));
        assert_eq!(direct, -gamma.clone() / BigRational::from_integer(12.into()));
        assert_eq!(ms.scalar_constant(m), direct);
        let n = normalization_constant(m);
        assert_eq!(direct * n.inv_gamma, -ratio(1, 12));
    }
    assert_eq!(gamma_half(6), BigInt::from(2));
}

#[test]
fn degenerate_scalar_family() {
    // c_(p,m) is the one-variable family at s = 1 with p = α + β.
    for m in [4u32, 6, 8] {
        for (a, b) in [(1, 1), (1, 2), (2, 1)] {
            let k = 2.0 * closed_form_basis(Basis::K { p: a, q: b }, m, 1.0, 1.0);
            let c = constant_c(a + b, m);
            let c = c.numer().to_string().parse::<f64>().unwrap() / c.denom().to_string().parse::<f64>().unwrap();
            assert!((k - c).abs() < 1e-12, "m={m} ({a},{b}): {k} vs {c}");
        }
    }
}

#[test]
fn quadrature_examples() {
    assert!((quadrature_oracle(1, 1, 0, 4, 1.0, 1.0).unwrap() - 0.5).abs() < 1e-9);
    assert!((quadrature_oracle(1, 1, 0, 4, 4.0, 1.0).unwrap() - 0.125).abs() < 1e-9);
    assert!((quadrature_oracle(1, 1, 1, 4, 1.0, 1.0).unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn quadrature_agrees_with_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let (p, q) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let l = if rng.gen_bool(0.5) { rng.gen_range(1..=2) } else { 0 };
        let m = 2 * rng.gen_range(2..=6);
        let (s, t) = (rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0));
        let basis = if l == 0 { Basis::K { p, q } } else { Basis::H { p, q, l } };
        let quad = quadrature_oracle(p, q, l, m, s, t).unwrap();
        let closed = closed_form_basis(basis, m, s, t);
        assert!((quad - closed).abs() < 1e-8, "{basis} m={m} s={s} t={t}: {quad} vs {closed}");
    }
}

#[test]
fn extraction_variable_is_u() {
    let f = fixtures::master_f();
    let k4 = f.substitute(Var::U, &RationalFunction::zero()).unwrap().substitute(Var::M, &RationalFunction::integer(4)).unwrap();
    assert!(k4.equals(&parse_expr("-1/(2*s)").unwrap()));
}
