use modcurv::cosphere::*;
use modcurv::symcalc::resolvent_b2;

#[test]
fn gamma_matrices() {
    for m in [4usize, 6, 8] {
        let g = clifford_gammas(m);
        assert_eq!(g.len(), m);
        assert_eq!(g[0].size(), 1 << (m / 2));
        for a in 0..m {
            for b in 0..m {
                let ab = &g[a] * &g[b];
                let ba = &g[b] * &g[a];
                if a == b {
                    assert_eq!(ab.as_scalar(), Some(num_complex::Complex::new(-1, 0)));
                } else {
                    assert_eq!(ab, ba.times_i_pow(2));
                }
            }
        }
    }
}

#[test]
fn sphere_rules_rederived() {
    for m in [4, 6, 8] {
        for seed in 0..3 {
            let rep = verify_sphere_rules(m, seed);
            assert!(rep.passed(), "{rep}");
        }
    }
}

#[test]
fn table_entries() {
    let r = sphere_rule(SpherePattern::DSigmaDSigmaDSquared);
    assert_eq!(r.factor, modcurv::exact::parse_expr("(2-m)/m").unwrap());
    assert_eq!(r.xi2_increment, 1);
    let r = sphere_rule(SpherePattern::DXi2D2Xi2Grad3Ell);
    assert!(r.scal);
    assert_eq!(r.factor, modcurv::exact::parse_expr("-8/(3*m)").unwrap());
}

#[test]
fn b2_closes_under_the_table() {
    let b2 = resolvent_b2().unwrap();
    let out = integrate_sphere(&b2).unwrap();
    assert!(!out.terms.is_empty());
    for t in &out.terms {
        assert!(t.coeff.is_real(), "{t}");
    }
}
