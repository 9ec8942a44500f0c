//! Numeric cross-check of the contour-integral/rearrangement chain.

use num_traits::Zero;

use super::{Basis, RearrangeError};
use crate::exact::{Assignment, Var};
use crate::quadrature::integrate_to_infinity;
use crate::RationalFunction;

fn rising(x: u32, n: u32) -> f64 {
    (0..n).map(|k| (x + k) as f64).product()
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `½ ∫₀^∞ u^{−j₀} (d/dλ)^{j₀}|_{λ=−1} (1−uλ)^{−p} (s−uλ)^{−q} (st−uλ)^{−l} du`
/// with `j₀ = (m−2)/2`; the λ-derivatives are expanded in closed form.
pub fn quadrature_oracle(p: u32, q: u32, l: u32, m: u32, s: f64, t: f64) -> Result<f64, RearrangeError> {
    assert!(m >= 4 && m % 2 == 0);
    let j0 = (m - 2) / 2;
    let st = s * t;
    let mut splits = Vec::new();
    for r1 in 0..=j0 {
        for r2 in 0..=j0 - r1 {
            let r3 = j0 - r1 - r2;
            let multinomial = factorial(j0) / (factorial(r1) * factorial(r2) * factorial(r3));
            let c = multinomial * rising(p, r1) * rising(q, r2) * rising(l, r3);
            if c != 0.0 {
                splits.push((c, (p + r1) as i32, (q + r2) as i32, (l + r3) as i32));
            }
        }
    }
    let f = |u: f64| {
        let (a, b, c) = (1.0 + u, s + u, st + u);
        0.5 * splits
            .iter()
            .map(|&(w, e1, e2, e3)| w * a.powi(-e1) * b.powi(-e2) * c.powi(-e3))
            .sum::<f64>()
    };
    Ok(integrate_to_infinity(f, 0.0, 1e-11, 4000)?)
}

/// `½ (d/du)^{j₀−1}` of the basis integrand at `u = 0`, evaluated at
/// `(s, t)`: the value the quadrature must reproduce.
pub fn closed_form_basis(basis: Basis, m: u32, s: f64, t: f64) -> f64 {
    let f: RationalFunction = basis.integrand().expect("resolvent family");
    let j = (m - 4) / 2;
    let g = f.differentiate(Var::U, j).substitute(Var::U, &RationalFunction::zero()).expect("u = 0 is regular");
    let at = Assignment::new().with_s(s).with_t(t).with_real(Var::M, m as f64);
    let v = g.eval_numeric(&at).expect("away from poles");
    debug_assert!(v.im.is_zero() || v.im.abs() < 1e-12);
    0.5 * v.re
}
