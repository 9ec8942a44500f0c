//! Per-dimension local curvature functions, their log and Dirac forms, the
//! Einstein–Hilbert gradient functions and their internal relations.

mod expr;

pub use expr::{arg, cst, f1, g2, s, t, CompiledRational, ModularExpr, SINGULAR_RADIUS};

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{ExactError, Monomial, Var};
use crate::rearrange::{derive_masters, normalization_constant, Masters, Normalization, RearrangeError};
use crate::report::{Check, VerificationReport};
use crate::{GaussRational, RationalFunction};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurvatureError {
    #[error("dimension {0} is not an even integer ≥ 4")]
    BadDimension(u32),
    #[error("evaluation of `{node}` at distance {distance} from its singular locus")]
    SingularLocus { node: String, distance: f64 },
    #[error("Richardson extrapolation diverged: estimate {estimate}, error {error}")]
    ExtrapolationDiverged { estimate: f64, error: f64 },
    #[error("argument {0} is not supplied")]
    MissingArgument(usize),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Rearrange(#[from] RearrangeError),
}

static MASTERS: OnceLock<Result<Masters, RearrangeError>> = OnceLock::new();

/// The pipeline output, derived once per process.
pub fn masters() -> Result<&'static Masters, CurvatureError> {
    MASTERS.get_or_init(derive_masters).as_ref().map_err(|e| CurvatureError::Rearrange(e.clone()))
}

/// Local curvature functions in a fixed dimension, as functions of the
/// modular variables `s = s4⁴`, `t = t4⁴`.
#[derive(Clone, Debug, Serialize)]
pub struct CurvatureSet {
    pub m: u32,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub k_delta: RationalFunction,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub h_delta: RationalFunction,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub k_dirac: RationalFunction,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub h_dirac: RationalFunction,
    /// Coefficient `c^(m)` of the scalar curvature term.
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub c_scal: BigRational,
    pub normalization: Normalization,
}

/// `(d/du)^j f` at `u = 0` with `m` fixed.
fn germ(f: &RationalFunction, m: u32, j: u32) -> Result<RationalFunction, ExactError> {
    let fm = f.substitute(Var::M, &RationalFunction::integer(m as i64))?;
    fm.differentiate(Var::U, j).substitute(Var::U, &RationalFunction::zero())
}

impl CurvatureSet {
    /// `K = (d/du)^{(m−4)/2} F` and `H = (d/du)^{(m−4)/2} G` at `u = 0`;
    /// no factorial normalization.
    pub fn extract(masters: &Masters, m: u32) -> Result<CurvatureSet, CurvatureError> {
        if m < 4 || m % 2 != 0 {
            return Err(CurvatureError::BadDimension(m));
        }
        let j = (m - 4) / 2;
        let k_delta = germ(&masters.f, m, j)?;
        let h_delta = germ(&masters.g, m, j)?;
        let s4 = RationalFunction::var(Var::S4);
        let s4t4 = RationalFunction::monomial(
            Monomial::var(Var::S4, 1).mul(&Monomial::var(Var::T4, 1)),
            GaussRational::from(1),
        );
        Ok(CurvatureSet {
            m,
            k_dirac: k_delta.clone() * s4,
            h_dirac: h_delta.clone() * s4t4,
            k_delta,
            h_delta,
            c_scal: masters.scalar_constant(m),
            normalization: normalization_constant(m),
        })
    }

    /// `c^(m) / Γ(m/2)`; equals −1/12 in every dimension.
    pub fn scalar_coefficient(&self) -> BigRational {
        self.c_scal.clone() * self.normalization.inv_gamma.clone()
    }

    pub fn j0(&self) -> f64 {
        (self.m as f64 - 2.0) / 2.0
    }
}

pub fn extract_dimension(m: u32) -> Result<CurvatureSet, CurvatureError> {
    CurvatureSet::extract(masters()?, m)
}

/// Log-form functions of the Dirac-type operator.
#[derive(Clone, Debug)]
pub struct LogForm {
    /// `𝒦(s) = e^{s/4} K(e^s) f₁(s/2)`
    pub k: Arc<ModularExpr>,
    /// `ℋ(s,t) = e^{(s+t)/4} [e^{s/2} H(e^s,e^t) f₁(s/2) f₁(t/2) + 2 g₂(s/2,t/2) K(e^{s+t})]`
    pub h: Arc<ModularExpr>,
}

pub fn log_form(set: &CurvatureSet) -> LogForm {
    let kk = |x: ModularExpr| ModularExpr::rational(&set.k_delta, vec![x]);
    let k = kk(s()) * s().scale(0.25).exp() * s().scale(0.5).f1();
    let hh = ModularExpr::rational(&set.h_delta, vec![s(), t()]);
    let first = s().scale(0.5).exp() * hh * s().scale(0.5).f1() * t().scale(0.5).f1();
    let second = s().scale(0.5).g2(t().scale(0.5)) * kk(s() + t()).scale(2.0);
    let h = (s() + t()).scale(0.25).exp() * (first + second);
    LogForm { k: Arc::new(k), h: Arc::new(h) }
}

/// Gradient functions of the Einstein–Hilbert action and the auxiliary
/// one- and two-variable functions entering their internal relations.
#[derive(Clone, Debug)]
pub struct EhFunctions {
    pub k_eh: Arc<ModularExpr>,
    pub h_eh: Arc<ModularExpr>,
    pub t: Arc<ModularExpr>,
    pub t_tilde: Arc<ModularExpr>,
    pub l: Arc<ModularExpr>,
    pub m: Arc<ModularExpr>,
    pub p: Arc<ModularExpr>,
    pub q: Arc<ModularExpr>,
}

impl EhFunctions {
    pub fn get(&self, name: &str) -> Option<&Arc<ModularExpr>> {
        Some(match name {
            "K_EH" => &self.k_eh,
            "H_EH" => &self.h_eh,
            "T" => &self.t,
            "T~" | "Ttilde" => &self.t_tilde,
            "L" => &self.l,
            "M" => &self.m,
            "P" => &self.p,
            "Q" => &self.q,
            _ => return None,
        })
    }

    /// `−(T + T̃)(s)`, the right side of the first relation.
    pub fn relation_one_rhs(&self) -> ModularExpr {
        -(self.t.at(vec![s()]) + self.t_tilde.at(vec![s()]))
    }

    /// `(L + M − P − Q)(s, t)`, the right side of the second relation.
    pub fn relation_two_rhs(&self) -> ModularExpr {
        let st = || vec![s(), t()];
        self.l.at(st()) + self.m.at(st()) - self.p.at(st()) - self.q.at(st())
    }
}

/// `P`-type combination `−2j₀ f₁(−j₀s) X(t) − 2 X[s+t, t] + 2 X[s+t, s]`,
/// with `X[a, b]` the divided difference.
fn p_type(j0: f64, x: &Arc<ModularExpr>) -> ModularExpr {
    s().scale(-j0).f1() * x.at(vec![t()]).scale(-2.0 * j0) - x.div_diff(s() + t(), t()).scale(2.0)
        + x.div_diff(s() + t(), s()).scale(2.0)
}

pub fn eh_functions(set: &CurvatureSet) -> EhFunctions {
    let j0 = set.j0();
    let lf = log_form(set);
    let sinh4 = Arc::new(s().scale(0.25).sinh());
    let k_eh = sinh4.div_diff(s(), cst(0.0)) * lf.k.at(vec![s()]).scale(-8.0 * j0);
    let h_eh = sinh4.div_diff(s() + t(), cst(0.0)) * lf.h.at(vec![s(), t()]).scale(-8.0 * j0);
    // 𝒦(0) = K(1)
    let k0 = lf.k.eval(&[0.0]).expect("regular at 0");
    let t_fn = Arc::new(s().scale(-j0).f1().scale(2.0 * j0 * k0) + lf.h.at(vec![s(), -s()]));
    let t_tilde = Arc::new(t_fn.at(vec![-s()]) * s().scale(-j0).exp());
    let l = (s() + t()).scale(-j0).f1() * t_fn.at(vec![s()]).scale(-2.0 * j0);
    // 2e^{−j₀(s+t)} [ −T[s, −t] + T[t, −s] e^{j₀t} ]
    let m = (s() + t()).scale(-j0).exp().scale(2.0)
        * (-t_fn.div_diff(s(), -t()) + t_fn.div_diff(t(), -s()) * t().scale(j0).exp());
    let p = p_type(j0, &t_fn);
    let q = p_type(j0, &t_tilde);
    EhFunctions {
        k_eh: Arc::new(k_eh),
        h_eh: Arc::new(h_eh),
        t: t_fn,
        t_tilde,
        l: Arc::new(l),
        m: Arc::new(m),
        p: Arc::new(p),
        q: Arc::new(q),
    }
}

/// Sample points in `[−3, 3]²` with `|s|, |t|, |s + t| ≥ 0.1`; point `i`
/// depends only on `(seed, i)`.
pub fn sample_points(samples: usize, seed: u64) -> Vec<(f64, f64)> {
    (0..samples)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            loop {
                let (a, b) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
                if f64::abs(a) >= 0.1 && f64::abs(b) >= 0.1 && f64::abs(a + b) >= 0.1 {
                    return (a, b);
                }
            }
        })
        .collect()
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(1.0)
}

/// Worst relative deviation over the sample points; evaluation errors
/// count as infinite deviation.
fn worst(points: &[(f64, f64)], f: impl Fn(f64, f64) -> Result<f64, CurvatureError> + Sync) -> (f64, Option<(f64, f64)>) {
    points
        .par_iter()
        .map(|&(a, b)| (f(a, b).unwrap_or(f64::INFINITY), (a, b)))
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0.0, None), |(e, at), (x, p)| if !(x <= e) { (x, Some(p)) } else { (e, at) })
}

/// Numerical check of both internal relations at `samples` points.
pub fn verify_relations(m: u32, samples: usize, tol: f64, seed: u64) -> Result<VerificationReport, CurvatureError> {
    let set = extract_dimension(m)?;
    let eh = eh_functions(&set);
    let pts = sample_points(samples, seed);
    let mut rep = VerificationReport::new(format!("relations m={m}"));
    let r1 = eh.relation_one_rhs();
    let (e1, at1) = worst(&pts, |a, _| Ok(rel(eh.k_eh.eval(&[a])?, r1.eval(&[a])?)));
    rep.push(Check::numeric(
        format!("m={m} K_EH = -(T + T~)"),
        e1,
        tol,
        format!("{samples} points, worst at {at1:?}"),
    ));
    let r2 = eh.relation_two_rhs();
    let (e2, at2) = worst(&pts, |a, b| Ok(rel(eh.h_eh.eval(&[a, b])?, r2.eval(&[a, b])?)));
    rep.push(Check::numeric(
        format!("m={m} H_EH = L + M - P - Q"),
        e2,
        tol,
        format!("{samples} points, worst at {at2:?}"),
    ));
    if m == 4 {
        rep.extend(dimension_four_closed_forms(&set, &eh, &pts));
    }
    Ok(rep)
}

/// Comparisons with the explicit four-dimensional expressions.
fn dimension_four_closed_forms(set: &CurvatureSet, eh: &EhFunctions, pts: &[(f64, f64)]) -> VerificationReport {
    let mut rep = VerificationReport::new("dimension four");
    let lf = log_form(set);
    let n = pts.len();
    let (e, _) = worst(pts, |u, _| Ok(rel(lf.k.eval(&[u])?, -2.0 * (-u / 2.0).exp() * (u / 4.0).sinh() / u)));
    rep.push(Check::numeric("m=4 log-form K = -2e^{-u/2}sinh(u/4)/u", e, 1e-12, format!("{n} points")));
    let (e, _) = worst(pts, |u, _| {
        let closed = -(-2.0 * u - 4.0 * (-u / 2.0).exp() + 4.0) / (u * u);
        Ok(rel(lf.h.eval(&[u, -u])?, closed))
    });
    rep.push(Check::numeric("m=4 log-form H(u,-u)", e, 1e-12, format!("{n} points")));
    let (e, _) = worst(pts, |u, v| {
        let closed = 4.0 * (-0.75 * (u + v)).exp() * (-u * (v / 2.0).exp() + ((u / 2.0).exp() - 1.0) * (v / 2.0).exp() * v + u)
            / (u * v * (u + v));
        Ok(rel(lf.h.eval(&[u, v])?, closed))
    });
    rep.push(Check::numeric("m=4 log-form H(u,v)", e, 1e-12, format!("{n} points")));
    // Both displays equal +4e^{−u}u^{−2}(e^{u/2} − 1)²; the first is −(T + T̃) expanded.
    let closed = |u: f64| 4.0 * (-u).exp() * ((u / 2.0).exp() - 1.0).powi(2) / (u * u);
    let rhs_display = |u: f64| {
        (-2.0 * u - 4.0 * (-u / 2.0).exp() + 4.0) / (u * u)
            - (-u).exp() * (-(2.0 * u - 4.0 * (u / 2.0).exp() + 4.0) / (u * u) - u.exp_m1() / u)
            - (-u).exp_m1() / u
    };
    let lhs_display = |u: f64| -8.0 * ((-0.75 * u).exp() - (-0.25 * u).exp()) * (u / 4.0).sinh() / (u * u);
    let (e, _) = worst(pts, |u, _| {
        let minus_sum = -(eh.t.eval(&[u])? + eh.t_tilde.eval(&[u])?);
        Ok(rel(minus_sum, rhs_display(u)).max(rel(rhs_display(u), closed(u))))
    });
    rep.push(Check::numeric("m=4 -(T+T~) display", e, 1e-12, format!("{n} points, = 4e^(-u)u^(-2)(e^(u/2)-1)^2")));
    let (e, _) = worst(pts, |u, _| Ok(rel(eh.k_eh.eval(&[u])?, lhs_display(u)).max(rel(lhs_display(u), closed(u)))));
    rep.push(Check::numeric("m=4 K_EH display", e, 1e-12, format!("{n} points, = 4e^(-u)u^(-2)(e^(u/2)-1)^2")));
    rep
}

/// Value at a point of a removable singularity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Limit {
    pub value: f64,
    pub error: f64,
}

/// Four-level Richardson extrapolation of symmetric averages
/// `(f(p + hd) + f(p − hd))/2`, `h = 0.8, 0.4, 0.2, 0.1`.
pub fn limit_eval(f: &ModularExpr, point: &[f64], direction: &[f64]) -> Result<Limit, CurvatureError> {
    let avg = |h: f64| -> Result<f64, CurvatureError> {
        let shift = |sign: f64| point.iter().zip(direction).map(|(p, d)| p + sign * h * d).collect::<Vec<_>>();
        Ok(0.5 * (f.eval(&shift(1.0))? + f.eval(&shift(-1.0))?))
    };
    let mut table: Vec<Vec<f64>> = Vec::new();
    for k in 0..4 {
        let mut row = vec![avg(0.8 / f64::powi(2.0, k))?];
        for j in 1..=k as usize {
            let factor = f64::powi(4.0, j as i32);
            let prev = &table[k as usize - 1];
            row.push(row[j - 1] + (row[j - 1] - prev[j - 1]) / (factor - 1.0));
        }
        table.push(row);
    }
    let value = table[3][3];
    let error = (table[3][3] - table[3][2]).abs();
    if !value.is_finite() || error > 1e-6 * value.abs().max(1.0) {
        return Err(CurvatureError::ExtrapolationDiverged { estimate: value, error });
    }
    Ok(Limit { value, error })
}

/// `−Γ(m/2)/12`.
pub fn expected_scalar_constant(m: u32) -> BigRational {
    -BigRational::new(crate::rearrange::gamma_half(m), BigInt::from(12))
}
