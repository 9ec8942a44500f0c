//! Matrix-model checks of the derivation identities for `e^h`, the
//! exchange of `∇` with functions of `▽`, and the variation lemmas behind
//! the Einstein–Hilbert gradient.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    d2exp_closed_form, dexp_closed_form, expm, frechet_exp, richardson_derivative, CMatrix, HermitianOperator,
    ModularData, Smooth,
};
use crate::curvature::f1;
use crate::report::{Check, VerificationReport};

type M = CMatrix<f64>;

/// Parameters of the oracle suite.
#[derive(Clone, Debug)]
pub struct OracleConfig {
    /// Dimensions `m` entering through `e^{(2−m)h}`.
    pub dims: Vec<u32>,
    /// Matrix sizes `n`.
    pub sizes: Vec<usize>,
    pub seeds: u32,
    pub seed: u64,
    pub tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { dims: vec![4, 6, 8], sizes: vec![5, 6, 7], seeds: 20, seed: 0, tol: 1e-9 }
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// `‖a − b‖_max / max(1, ‖a‖_max)`.
fn rel(a: &M, b: &M) -> f64 {
    (a - b).max_abs() / a.max_abs().max(1.0)
}

fn rel_c(a: Complex<f64>, b: Complex<f64>) -> f64 {
    (a - b).norm() / a.norm().max(1.0)
}

/// `|lhs − Σ terms|` relative to the largest of `1`, `|lhs|` and the
/// individual terms, the scale at which cancellation happens.
fn rel_terms(lhs: Complex<f64>, terms: &[Complex<f64>]) -> f64 {
    let sum: Complex<f64> = terms.iter().sum();
    let scale = terms.iter().map(|t| t.norm()).fold(lhs.norm().max(1.0), f64::max);
    (lhs - sum).norm() / scale
}

/// The derivation `∇ = ad_{iD}`.
fn nabla(d: &M, x: &M) -> M {
    d.commutator(x).scale_c(Complex::new(0.0, 1.0))
}

/// Hermitian matrix with a doubly repeated eigenvalue.
fn degenerate_hermitian(n: usize, r: &mut ChaCha8Rng) -> M {
    let u = HermitianOperator::new(&M::random_hermitian(n, r)).eigen.vectors;
    let mut d: Vec<f64> = (0..n).map(|k| -1.0 + 2.0 * k as f64 / n as f64).collect();
    d[1] = d[0];
    &(&u * &M::diagonal(&d)) * &u.adjoint()
}

/// Identities for `δ(e^h)` and `δ²(e^h)`: block exponential against the
/// closed forms, against `ad_{iD}` applied to `e^h`, and against finite
/// differences of `expm`.
pub fn verify_frechet(n: usize, seed: u64, tol: f64) -> VerificationReport {
    let mut rep = VerificationReport::new("frechet");
    let mut r = rng(seed, n as u64);
    let hm = M::random_hermitian(n, &mut r);
    let h = HermitianOperator::new(&hm);
    rep.push(Check::numeric("eigendecomposition residual", h.residual(), 1e-12, format!("n={n}")));
    let md = ModularData::new(&h);
    rep.push(Check::numeric("e^h by expm vs spectral", rel(&expm(&hm), &md.weyl), 1e-12, ""));

    let along_h = frechet_exp(&hm, &hm, None, 1);
    rep.push(Check::numeric("delta e^h with X = h equals h e^h", rel(&along_h, &(&hm * &md.weyl)), 1e-12, ""));

    let x = M::random(n, &mut r);
    let d1 = frechet_exp(&hm, &x, None, 1);
    rep.push(Check::numeric("delta e^h = e^h f1(nabla/2)(X)", rel(&d1, &dexp_closed_form(&md, &x)), tol, ""));
    let step = 1e-5;
    let fd = (&expm(&(&hm + &x.scale(step))) - &expm(&(&hm - &x.scale(step)))).scale(0.5 / step);
    rep.push(Check::numeric("delta e^h vs central difference", (&d1 - &fd).max_abs(), 1e-7, "step 1e-5, absolute"));

    let z = M::random(n, &mut r);
    let d2 = frechet_exp(&hm, &x, Some(&z), 2);
    rep.push(Check::numeric(
        "delta^2 e^h = e^h[f1(nabla/2)(Z) + 2 g2(nabla/2, nabla/2)(X X)]",
        rel(&d2, &d2exp_closed_form(&md, &x, &z)),
        tol,
        "",
    ));

    // an inner derivation acts on e^h directly
    let dm = M::random_hermitian(n, &mut r).scale(2.0);
    let xh = nabla(&dm, &hm);
    let zh = nabla(&dm, &xh);
    let k = &md.weyl;
    rep.push(Check::numeric("ad_iD(e^h) = block derivative", rel(&nabla(&dm, k), &frechet_exp(&hm, &xh, None, 1)), tol, ""));
    rep.push(Check::numeric(
        "ad_iD^2(e^h) = block second derivative",
        rel(&nabla(&dm, &nabla(&dm, k)), &frechet_exp(&hm, &xh, Some(&zh), 2)),
        tol,
        "",
    ));
    rep
}

/// `∇(T(▽)ψ) = T(▽)(∇ψ) + L₁(▽,▽)((∇h)ψ) + L₂(▽,▽)(ψ∇h)` with
/// `L₁(s,t) = −2(T(s+t) − T(t))/s` and `L₂(s,t) = 2(T(s+t) − T(s))/t`.
pub fn verify_nabla_exchange(n: usize, seed: u64, tol: f64) -> VerificationReport {
    let mut rep = VerificationReport::new("nabla exchange");
    let mut r = rng(seed, 100 + n as u64);
    let generic = M::random_hermitian(n, &mut r);
    let degenerate = degenerate_hermitian(n, &mut r);
    let dm = M::random_hermitian(n, &mut r).scale(2.0);
    let psi = M::random(n, &mut r);
    let (y, w) = (M::random_hermitian(n, &mut r), M::random(n, &mut r));
    for (label, hm) in [("distinct spectrum", &generic), ("repeated eigenvalue", &degenerate)] {
        let h = HermitianOperator::new(hm);
        let md = ModularData::new(&h);
        for t in [Smooth::gaussian(), Smooth::rational()] {
            let l1 = |s: f64, u: f64| -2.0 * t.divided(s + u, u);
            let l2 = |s: f64, u: f64| 2.0 * t.divided(s + u, s);
            let tf = |x: &M| md.apply(|s| t.eval(s), x);
            let rhs = |dh: &M, dpsi: &M| &(&tf(dpsi) + &md.apply2(l1, dh, &psi)) + &md.apply2(l2, &psi, dh);

            let lhs = nabla(&dm, &tf(&psi));
            let e = rel(&lhs, &rhs(&nabla(&dm, hm), &nabla(&dm, &psi)));
            rep.push(Check::numeric(format!("ad_iD exchange, T {}, {label}", t.name), e, tol, format!("n={n}")));

            let pert = richardson_derivative(
                |eps| {
                    let he = HermitianOperator::new(&(hm + &y.scale(eps)));
                    ModularData::new(&he).apply(|s| t.eval(s), &(&psi + &w.scale(eps)))
                },
                0.05,
            );
            let e = rel(&pert, &rhs(&y, &w));
            rep.push(Check::numeric(format!("perturbative exchange, T {}, {label}", t.name), e, tol, format!("n={n}")));
        }
    }
    let md = ModularData::new(&HermitianOperator::new(&generic));
    let one = Smooth::constant(1.0);
    let l = md.apply2(|s, u| -2.0 * one.divided(s + u, u), &nabla(&dm, &generic), &psi);
    rep.push(Check::numeric("exchange terms vanish for T = 1", l.max_abs(), 1e-15, ""));
    rep
}

/// The four variation lemmas with `c = 2 − m`, `φ₀ = Tr` and `∇ = ad_{iD}`.
///
/// `h` is drawn at half the usual scale: `T̃(s) = T(−s)e^{cs/2}` at
/// `m = 8` grows like `e^{3|μ|}`, and a spectral radius near 1 keeps the
/// weights within `e^{12}`.
pub fn verify_variation_lemmas(m: u32, n: usize, seed: u64, tol: f64) -> VerificationReport {
    let mut rep = VerificationReport::new(format!("variation lemmas m={m}"));
    let c = 2.0 - m as f64;
    let mut r = rng(seed, 1000 * m as u64 + n as u64);
    let hm = M::random_hermitian(n, &mut r).scale(0.5);
    let am = M::random_hermitian(n, &mut r);
    let dm = M::random_hermitian(n, &mut r).scale(2.0);
    let psi = M::random(n, &mut r);
    let h = HermitianOperator::new(&hm);
    let md = ModularData::new(&h);
    let ech = h.function(|l| (c * l).exp());
    let f1c = Smooth::f1_scaled(c / 2.0);
    let tr = |x: &M| x.trace();
    let detail = format!("n={n}");

    for t in [Smooth::gaussian(), Smooth::rational()] {
        let tn = &t.name;
        let tf = |x: &M| md.apply(|s| t.eval(s), x);
        // L(s,t) = c f₁(c(s+t)/2) T(s)
        let dech = frechet_exp(&hm.scale(c), &am.scale(c), None, 1);
        let lhs = tr(&(&(&dech * &tf(&psi)) * &psi));
        let lfun = |s: f64, u: f64| c * f1c.eval(s + u) * t.eval(s);
        let rhs = tr(&(&(&am * &ech) * &md.apply2(lfun, &psi, &psi)));
        rep.push(Check::numeric(format!("exponential-factor variation (L), T {tn}"), rel_c(lhs, rhs), tol, detail.clone()));

        // the same in the commutative reduction h = αI
        let alpha = 0.37;
        let hc = M::identity(n).scale(alpha);
        let mdc = ModularData::new(&HermitianOperator::new(&hc));
        let lhs = tr(&(&(&frechet_exp(&hc.scale(c), &am.scale(c), None, 1) * &mdc.apply(|s| t.eval(s), &psi)) * &psi));
        let rhs = tr(&(&am * &mdc.apply2(lfun, &psi, &psi))) * (c * alpha).exp();
        let reduced = tr(&(&am * &(&psi * &psi))) * (c * alpha).exp() * c * t.eval(0.0);
        let e = rel_c(lhs, rhs).max(rel_c(lhs, reduced));
        rep.push(Check::numeric(format!("exponential-factor variation, scalar h, T {tn}"), e, tol, detail.clone()));

        // M(s,t) = 2e^{c(s+t)/2}[(T(−t) − T(s))/(s+t) + (T(t) − T(−s))/(s+t) e^{−ct/2}]
        let dt = richardson_derivative(
            |eps| {
                let he = HermitianOperator::new(&(&hm + &am.scale(eps)));
                let v = tr(&(&(&ech * &ModularData::new(&he).apply(|s| t.eval(s), &psi)) * &psi));
                M::from_fn(1, |_, _| v)
            },
            0.05,
        );
        let lhs = dt[(0, 0)];
        let mfun = |s: f64, u: f64| {
            2.0 * (c * (s + u) / 2.0).exp() * (-t.divided(s, -u) + t.divided(u, -s) * (-c * u / 2.0).exp())
        };
        let rhs = tr(&(&(&am * &ech) * &md.apply2(mfun, &psi, &psi)));
        rep.push(Check::numeric(format!("modular-derivation variation (M), T {tn}"), rel_c(lhs, rhs), tol, detail.clone()));

        // P and Q, by integration by parts against ∇a
        let nh = nabla(&dm, &hm);
        let n2h = nabla(&dm, &nh);
        let na = nabla(&dm, &am);
        let p_type = |x: &Smooth| {
            let x = x.clone();
            let f1c = f1c.clone();
            move |s: f64, u: f64| c * f1c.eval(s) * x.eval(u) - 2.0 * x.divided(s + u, u) + 2.0 * x.divided(s + u, s)
        };
        let lhs = tr(&(&(&ech * &tf(&nh)) * &na));
        let rhs = [-tr(&(&(&am * &ech) * &tf(&n2h))), -tr(&(&(&am * &ech) * &md.apply2(p_type(&t), &nh, &nh)))];
        let e = rel_terms(lhs, &rhs);
        rep.push(Check::numeric(format!("integration by parts, grad a on the right (P), T {tn}"), e, tol, detail.clone()));

        let tt = t.tilde(c);
        let lhs = tr(&(&(&ech * &tf(&na)) * &nh));
        let rhs = [
            -tr(&(&(&am * &ech) * &md.apply(|s| tt.eval(s), &n2h))),
            -tr(&(&(&am * &ech) * &md.apply2(p_type(&tt), &nh, &nh))),
        ];
        let e = rel_terms(lhs, &rhs);
        rep.push(Check::numeric(format!("integration by parts, grad a on the left (Q), T {tn}"), e, tol, detail.clone()));
    }

    // scalar-curvature special case: d/dε Tr(e^{c(h+εa)}) = c Tr(a e^{ch})
    let lhs = tr(&frechet_exp(&hm.scale(c), &am.scale(c), None, 1));
    let rhs = tr(&(&am * &ech)) * c;
    rep.push(Check::numeric("exponential-factor variation, central integrand", rel_c(lhs, rhs), tol, detail.clone()));

    // the f₁ used above agrees with its definition
    rep.push(Check::numeric("f1 scaling", (f1c.eval(0.8) - f1(0.4 * c)).abs(), 1e-15, ""));
    rep
}

/// Trace property of `φ₀ = Tr` and sanity cases of the functional calculus.
pub fn verify_trace_property(n: usize, seed: u64, tol: f64) -> VerificationReport {
    let mut rep = VerificationReport::new("trace property");
    let mut r = rng(seed, 5000 + n as u64);
    let hm = M::random_hermitian(n, &mut r);
    let md = ModularData::new(&HermitianOperator::new(&hm));
    let (x, y) = (M::random(n, &mut r), M::random(n, &mut r));
    let k = &md.weyl;
    let kinv = HermitianOperator::new(&hm).function(|l| (-l).exp());
    let k2 = k * k;
    let k2inv = &kinv * &kinv;
    let delta = md.apply(f64::exp, &x);
    rep.push(Check::numeric("exp(nabla)(x) = k^-2 x k^2", rel(&delta, &(&(&k2inv * &x) * &k2)), 1e-12, ""));
    rep.push(Check::numeric("Tr(Delta x) = Tr x", rel_c(delta.trace(), x.trace()), tol, ""));
    rep.push(Check::numeric("f = 1 leaves x unchanged", rel(&md.apply(|_| 1.0, &x), &x), 1e-13, ""));
    let h2 = &hm * &hm;
    let g = Smooth::gaussian();
    rep.push(Check::numeric(
        "[h, x] = 0 gives f(0) x",
        rel(&md.apply(|s| g.eval(s), &h2), &h2.scale(g.eval(0.0))),
        1e-12,
        "x = h^2",
    ));
    for f in [Smooth::gaussian(), Smooth::rational()] {
        let lhs = (&md.apply(|s| f.eval(s), &x) * &y).trace();
        let rhs = (&x * &md.apply(|s| f.eval(-s), &y)).trace();
        rep.push(Check::numeric(format!("Tr(f(nabla)(x) y) = Tr(x f(-nabla)(y)), f {}", f.name), rel_c(lhs, rhs), tol, ""));
    }
    rep
}

/// Every oracle check over all seeds, sizes and dimensions; cases run in
/// parallel and are merged by check name keeping the worst error.
pub fn verify_oracle(cfg: &OracleConfig) -> VerificationReport {
    let mut cases: Vec<(u32, usize, Option<u32>)> = Vec::new();
    for s in 0..cfg.seeds {
        for &n in &cfg.sizes {
            cases.push((s, n, None));
            for &m in &cfg.dims {
                cases.push((s, n, Some(m)));
            }
        }
    }
    let reports: Vec<VerificationReport> = cases
        .par_iter()
        .map(|&(s, n, m)| {
            let seed = cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(s as u64);
            match m {
                None => {
                    let mut rep = verify_frechet(n, seed, cfg.tol);
                    rep.extend(verify_nabla_exchange(n, seed, cfg.tol));
                    rep.extend(verify_trace_property(n, seed, cfg.tol));
                    rep
                }
                Some(m) => {
                    let mut rep = verify_variation_lemmas(m, n, seed, cfg.tol);
                    for c in &mut rep.checks {
                        c.name = format!("m={m} {}", c.name);
                    }
                    rep
                }
            }
        })
        .collect();
    let sizes: Vec<String> = cfg.sizes.iter().map(|n| n.to_string()).collect();
    let mut out = VerificationReport::merge_worst("oracle", reports);
    for c in &mut out.checks {
        c.details = format!("{} seeds, n in {{{}}}; {}", cfg.seeds, sizes.join(","), c.details);
    }
    out
}
