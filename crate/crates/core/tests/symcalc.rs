use modcurv::exact::{ratio, Coeff};
use modcurv::symcalc::*;
use modcurv::GaussRational;
use num_traits::One;

fn sum(lines: &[&str]) -> SymbolSum {
    lines.iter().map(|l| l.parse::<SymbolTerm>().unwrap()).collect()
}

#[test]
fn p_symbols() {
    let p = build_p_symbols();
    assert_eq!(p.p0.terms()[0].coeff, ratio(1, 4).into());
    assert_eq!(p.p1.terms()[0].coeff, -GaussRational::i());
    assert_eq!(p.p2.terms()[0].xi_degree(), 2);
}

#[test]
fn vertical_rules() {
    let b0 = resolvent_b0();
    assert_eq!(vertical_diff(&b0), sum(&["-1 * K^2 B0^2 DXi2_a"]));
    let dd = vertical_diff(&vertical_diff(&b0));
    assert_eq!(dd, sum(&["2 * K^4 B0^3 DXi2_a DXi2_b", "-1 * K^2 B0^2 D2Xi2_ab"]));
    assert!(vertical_diff(&sum(&["1 * K Scal"])).is_zero());
}

#[test]
fn horizontal_rules() {
    let kk = sum(&["1 * K^2"]);
    assert_eq!(horizontal_diff(&kk).unwrap(), sum(&["1 * GradK_a K", "1 * K GradK_a"]));
    let p2 = build_p_symbols().p2;
    let nn = horizontal_diff2(&p2).unwrap();
    let free: SymbolSum = nn.terms().iter().filter(|t| !t.contains(AtomKind::Xi2)).cloned().collect();
    assert_eq!(free, sum(&["1 * K^2 Grad2Xi2_ab"]));
    assert!(horizontal_diff(&sum(&["1 * SigmaD"])).unwrap().is_zero());
    assert!(matches!(
        horizontal_diff(&sum(&["1 * Grad2K_ab"])),
        Err(SymbolError::NoRule { .. })
    ));
}

#[test]
fn product_terms_of_dirac_symbol() {
    let s = sum(&["1 * SigmaD"]);
    assert_eq!(widom_product(0, &s, &s).unwrap(), sum(&["1 * Xi2"]));
    assert!(widom_product(1, &s, &s).unwrap().is_zero());
    assert_eq!(widom_product(2, &s, &s).unwrap(), sum(&["1/4 * Scal"]));
    assert_eq!(dirac_square_symbol().unwrap(), sum(&["1 * Xi2", "1/4 * Scal"]));
    assert_eq!(widom_product(3, &s, &s), Err(SymbolError::UnsupportedOrder(3)));
}

#[test]
fn first_resolvent_term() {
    let b1 = resolvent_b1().unwrap();
    assert_eq!(b1.len(), 3);
    assert!(b1.terms().iter().all(|t| t.xi_degree() == -3));
}

#[test]
fn second_resolvent_term() {
    let parts = resolvent_b2_parts().unwrap();
    let counts: Vec<usize> = parts.iter().map(|(_, s)| s.len()).collect();
    assert_eq!(counts, [1, 3, 2, 22, 10]);
    let b2 = resolvent_b2().unwrap();
    assert_eq!(b2.len(), 38);
    assert!(b2.terms().iter().all(|t| t.xi_degree() == -4 && t.coeff.is_real()));
    assert_eq!(parts[0].1, sum(&["-1/4 * K^2 B0^2 Scal"]));
}

#[test]
fn parametrix_reconstruction() {
    let [d0, d1, d2] = reconstruction_residual().unwrap();
    assert_eq!(d0, SymbolSum::constant(GaussRational::one()));
    assert!(d1.is_zero(), "{d1}");
    assert!(d2.is_zero(), "{d2}");
}

#[test]
fn zeroth_product_is_associative() {
    let p = build_p_symbols();
    let b1 = resolvent_b1().unwrap();
    let l = widom_product(0, &widom_product(0, &b1, &p.p1).unwrap(), &p.p0).unwrap();
    let r = widom_product(0, &b1, &widom_product(0, &p.p1, &p.p0).unwrap()).unwrap();
    assert_eq!(l, r);
}
