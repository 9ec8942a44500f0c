use modcurv::thetadeform::{bicharacter, deformed_mul, verify_theta, weyl_exp, FourierElement, ThetaError, ThetaMatrix};
use num_complex::Complex;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type F = FourierElement<f64>;

#[test]
fn theta_suite_passes_on_rank_two_radius_four() {
    for seed in 0..3 {
        let rep = verify_theta(2, 4, seed, 1e-12);
        assert!(rep.passed(), "{rep}");
    }
}

#[test]
fn rank_three_suite_passes() {
    let rep = verify_theta(3, 2, 9, 1e-12);
    assert!(rep.passed(), "{rep}");
}

#[test]
fn skew_symmetry_is_enforced() {
    assert!(matches!(ThetaMatrix::new(2, vec![0.0, 1.0, 1.0, 0.0]), Err(ThetaError::NotSkew(_))));
    assert!(ThetaMatrix::new(2, vec![0.0, 0.3, -0.3, 0.0]).is_ok());
}

#[test]
fn truncation_cap_is_signalled() {
    let mut r = ChaCha8Rng::seed_from_u64(1);
    let f = F::random(2, 3, &mut r);
    let theta = ThetaMatrix::random(2, &mut r);
    assert_eq!(deformed_mul(&f, &f, &theta, 5), Err(ThetaError::TruncationOverflow { radius: 6, cap: 5 }));
    assert!(matches!(weyl_exp(&f, &theta, 13, 100), Err(ThetaError::DegreeTooLarge(13))));
}

#[test]
fn exponential_of_zero_is_one() {
    let theta = ThetaMatrix::random(2, &mut ChaCha8Rng::seed_from_u64(2));
    let (e, tail) = weyl_exp(&F::zero(2), &theta, 6, 10).unwrap();
    assert_eq!(e.sub(&F::one(2)).sup(), 0.0);
    assert_eq!(tail, 0.0);
}

#[test]
fn monomials_twist_by_the_bicharacter() {
    let theta = ThetaMatrix::new(2, vec![0.0, 0.25, -0.25, 0.0]).unwrap();
    let a = F::monomial(vec![1, 0], Complex::new(1.0, 0.0));
    let b = F::monomial(vec![0, 1], Complex::new(1.0, 0.0));
    let ab = deformed_mul(&a, &b, &theta, 4).unwrap();
    let ba = deformed_mul(&b, &a, &theta, 4).unwrap();
    // e₁ e₂ = χ(e₁, e₂)² e₂ e₁ with ⟨θe₁, e₂⟩ = θ₂₁ = −1/4
    let chi = bicharacter(&theta, &[1, 0], &[0, 1]);
    assert!((chi - Complex::from_polar(1.0, -std::f64::consts::PI / 4.0)).norm() < 1e-15);
    assert!((ab.coeff(&[1, 1]) - chi * chi * ba.coeff(&[1, 1])).norm() < 1e-15);
}

fn lattice() -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(-5i32..=5, 2)
}

proptest! {
    #[test]
    fn bicharacter_is_multiplicative(t in -2.0f64..2.0, r in lattice(), l in lattice(), p in lattice()) {
        let theta = ThetaMatrix::new(2, vec![0.0, t, -t, 0.0]).unwrap();
        let rl: Vec<i32> = r.iter().zip(&l).map(|(a, b)| a + b).collect();
        let lhs = bicharacter(&theta, &rl, &p);
        let rhs = bicharacter(&theta, &r, &p) * bicharacter(&theta, &l, &p);
        prop_assert!((lhs - rhs).norm() < 1e-12);
        prop_assert!((bicharacter(&theta, &r, &r) - 1.0).norm() < 1e-12);
    }

    #[test]
    fn star_reverses_products(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let theta = ThetaMatrix::random(2, &mut rng);
        let f = F::random(2, 2, &mut rng);
        let g = F::random(2, 2, &mut rng);
        let lhs = deformed_mul(&f, &g, &theta, 8).unwrap().star();
        let rhs = deformed_mul(&g.star(), &f.star(), &theta, 8).unwrap();
        prop_assert!(lhs.sub(&rhs).sup() < 1e-13);
        prop_assert!(f.star().star() == f);
    }
}
