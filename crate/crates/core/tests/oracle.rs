use modcurv::curvature::masters;
use modcurv::oracle::{
    apply_modular_fn, dexp_closed_form, expm, frechet_exp, hermitian_eigen, verify_frechet, verify_nabla_exchange,
    verify_normal_order, verify_oracle, verify_trace_property, verify_variation_lemmas, CMatrix, HermitianOperator,
    ModularData, OracleConfig, Smooth,
};
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type M = CMatrix<f64>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn jacobi_diagonalizes() {
    let mut r = rng(3);
    for n in [1, 2, 5, 8, 16] {
        let a = M::random_hermitian(n, &mut r);
        let h = HermitianOperator::new(&a);
        assert!(h.residual() < 1e-12, "n={n}: {}", h.residual());
        let v = &h.eigen.vectors;
        assert!((&(&v.adjoint() * v) - &M::identity(n)).max_abs() < 1e-13);
        assert!(h.eigen.values.windows(2).all(|w| w[0] <= w[1]));
    }
    let d = M::diagonal(&[3.0, -1.0, 2.0]);
    assert_eq!(hermitian_eigen(&d).values, vec![-1.0, 2.0, 3.0]);
}

#[test]
fn expm_matches_spectral_and_scalar() {
    let mut r = rng(4);
    let a = M::random_hermitian(6, &mut r).scale(8.0);
    let h = HermitianOperator::new(&a);
    let e = expm(&a);
    assert!((&e - &h.function(f64::exp)).max_abs() / e.max_abs() < 1e-13);
    // nilpotent: exp(N) = I + N
    let mut n = M::zeros(3);
    n[(0, 1)] = Complex::new(2.0, 1.0);
    let en = expm(&n);
    assert!((&en - &(&M::identity(3) + &n)).max_abs() < 1e-15);
}

#[test]
fn modular_calculus_conventions() {
    let mut r = rng(5);
    let hm = M::random_hermitian(5, &mut r);
    let h = HermitianOperator::new(&hm);
    let x = M::random(5, &mut r);
    let md = ModularData::new(&h);
    assert!((md.mu(0, 1) + 2.0 * (md.eigvals[0] - md.eigvals[1])).abs() < 1e-15);
    // ▽ = −2 ad_h
    let nab = apply_modular_fn(|s| s, &h, &x);
    assert!((&nab - &hm.commutator(&x).scale(-2.0)).max_abs() < 1e-12);
    // f₁(▽) instead of f₁(▽/2) does not give δ(e^h)
    let d1 = frechet_exp(&hm, &x, None, 1);
    assert!((&d1 - &dexp_closed_form(&md, &x)).max_abs() < 1e-12);
    let wrong = &md.weyl * &md.apply(modcurv::curvature::f1, &x);
    assert!((&d1 - &wrong).max_abs() > 1e-2);
}

#[test]
fn divided_differences_are_continuous() {
    for f in [Smooth::gaussian(), Smooth::rational(), Smooth::gaussian().tilde(-4.0), Smooth::f1_scaled(-2.0)] {
        for a in [-1.3, 0.0, 0.4, 2.2] {
            let near = f.divided(a + 0.0099, a);
            let direct = (f.eval(a + 0.0099) - f.eval(a)) / 0.0099;
            assert!((near - direct).abs() < 1e-12, "{f:?} at {a}");
            let h = 1e-6;
            let fd = (f.eval(a + h) - f.eval(a - h)) / (2.0 * h);
            assert!((f.divided(a, a) - fd).abs() < 1e-8, "{f:?} at {a}");
        }
    }
}

#[test]
fn single_cases_pass() {
    for rep in [
        verify_frechet(6, 11, 1e-9),
        verify_nabla_exchange(6, 11, 1e-9),
        verify_trace_property(6, 11, 1e-9),
        verify_variation_lemmas(4, 6, 11, 1e-9),
        verify_variation_lemmas(6, 5, 12, 1e-9),
    ] {
        assert!(rep.passed(), "{rep}");
    }
}

#[test]
fn full_oracle_suite() {
    let rep = verify_oracle(&OracleConfig::default());
    assert!(rep.passed(), "{rep}");
    assert!(rep.checks.len() > 20);
}

#[test]
fn normal_ordering_is_faithful() {
    let terms = &masters().unwrap().integrated;
    assert!(!terms.is_empty());
    let rep = verify_normal_order(terms, 50, 6, 1, 1e-10);
    assert!(rep.passed(), "{rep}");
}
