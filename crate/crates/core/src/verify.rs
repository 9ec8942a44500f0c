//! Verification suites run by the command line and the acceptance tests.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cosphere::verify_sphere_rules;
use crate::curvature::{expected_scalar_constant, extract_dimension, masters, verify_relations};
use crate::exact::parse_expr;
use crate::fixtures;
use crate::oracle::{verify_normal_order, verify_oracle, OracleConfig};
use crate::rearrange::{closed_form_basis, constant_c, normalization_constant, quadrature_oracle, Basis};
use crate::report::{Check, VerificationReport};
use crate::symcalc::{dirac_square_symbol, reconstruction_residual, resolvent_b1, resolvent_b2, SymbolSum, SymbolTerm};
use crate::thetadeform::verify_theta;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Pipeline,
    Relations,
    Oracle,
    Clifford,
    Quadrature,
    Theta,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Pipeline, Suite::Relations, Suite::Oracle, Suite::Clifford, Suite::Quadrature, Suite::Theta];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Pipeline => "pipeline",
            Suite::Relations => "relations",
            Suite::Oracle => "oracle",
            Suite::Clifford => "clifford",
            Suite::Quadrature => "quadrature",
            Suite::Theta => "theta",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Suite, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// Parameters of every suite. `tol` overrides the per-suite default
/// tolerance where one is given.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Dimensions for the relations suite.
    pub relation_dims: Vec<u32>,
    pub samples: usize,
    pub oracle_dims: Vec<u32>,
    pub oracle_sizes: Vec<usize>,
    pub oracle_seeds: u32,
    pub quadrature_cases: usize,
    pub sphere_dims: Vec<usize>,
    pub normal_order_instances: usize,
    pub normal_order_size: usize,
    pub rank: usize,
    pub radius: u32,
    pub tol: Option<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            relation_dims: vec![4, 6, 8, 10],
            samples: 100,
            oracle_dims: vec![4, 6, 8],
            oracle_sizes: vec![5, 6, 7],
            oracle_seeds: 20,
            quadrature_cases: 50,
            sphere_dims: vec![4, 6, 8],
            normal_order_instances: 50,
            normal_order_size: 6,
            rank: 2,
            radius: 4,
            tol: None,
        }
    }
}

impl VerifyConfig {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> VerificationReport {
    match suite {
        Suite::Pipeline => pipeline(cfg),
        Suite::Relations => relations(cfg),
        Suite::Oracle => verify_oracle(&OracleConfig {
            dims: cfg.oracle_dims.clone(),
            sizes: cfg.oracle_sizes.clone(),
            seeds: cfg.oracle_seeds,
            seed: cfg.seed,
            tol: cfg.tol(1e-9),
        }),
        Suite::Clifford => clifford(cfg),
        Suite::Quadrature => quadrature(cfg),
        Suite::Theta => {
            let mut rep = verify_theta(cfg.rank, cfg.radius, cfg.seed, cfg.tol(1e-12));
            rep.suite = "theta".into();
            rep
        }
    }
}

/// Runs the suites in parallel; the reports come back in the given order.
pub fn run_suites(suites: &[Suite], cfg: &VerifyConfig) -> Vec<VerificationReport> {
    suites.par_iter().map(|&s| run_suite(s, cfg)).collect()
}

fn sum_of(lines: &[&str]) -> SymbolSum {
    lines.iter().map(|l| l.parse::<SymbolTerm>().expect("literal symbol term")).collect()
}

/// The symbolic chain from the resolvent symbols to the per-dimension
/// functions, in exact arithmetic.
pub fn pipeline(cfg: &VerifyConfig) -> VerificationReport {
    let mut rep = VerificationReport::new("pipeline");
    match resolvent_b1() {
        Ok(b1) => rep.push(Check::exact("b1 = reference, term by term", b1 == fixtures::reference_b1(), format!("{} terms", b1.len()))),
        Err(e) => rep.push(Check::failed("b1 = reference, term by term", e.to_string())),
    }
    match resolvent_b2() {
        Ok(b2) => rep.push(Check::exact("b2 has 38 terms of xi-degree -4", b2.len() == 38 && b2.terms().iter().all(|t| t.xi_degree() == -4), format!("{} terms", b2.len()))),
        Err(e) => rep.push(Check::failed("b2 has 38 terms of xi-degree -4", e.to_string())),
    }
    match reconstruction_residual() {
        Ok([_, d1, d2]) => rep.push(Check::exact(
            "parametrix reconstruction: orders 1 and 2 vanish",
            d1.is_zero() && d2.is_zero(),
            format!("residuals {d1} | {d2}"),
        )),
        Err(e) => rep.push(Check::failed("parametrix reconstruction: orders 1 and 2 vanish", e.to_string())),
    }
    match dirac_square_symbol() {
        Ok(sym) => rep.push(Check::exact(
            "sigma(D^2) = |xi|^2 + Scal/4",
            sym == sum_of(&["1 * Xi2", "1/4 * Scal"]),
            sym.to_string(),
        )),
        Err(e) => rep.push(Check::failed("sigma(D^2) = |xi|^2 + Scal/4", e.to_string())),
    }

    let ms = match masters() {
        Ok(ms) => ms,
        Err(e) => {
            rep.push(Check::failed("masters derived", e.to_string()));
            return rep;
        }
    };
    rep.push(Check::exact("F = reference", ms.f.equals(&fixtures::master_f()), "symbolic in m"));
    rep.push(Check::exact("G = reference", ms.g.equals(&fixtures::master_g()), "symbolic in m"));

    for m in [4u32, 6, 8] {
        match extract_dimension(m) {
            Ok(set) => {
                let k_ok = fixtures::listed_k(m).is_some_and(|k| set.k_delta.equals(&k));
                let h_ok = fixtures::listed_h(m).is_some_and(|h| set.h_delta.equals(&h));
                rep.push(Check::exact(format!("m={m} K = listing"), k_ok, set.k_delta.pretty()));
                rep.push(Check::exact(format!("m={m} H = listing"), h_ok, set.h_delta.pretty()));
                if m == 4 {
                    let k4 = parse_expr("-1/(2*s4^4)").expect("literal");
                    let h4 = parse_expr("1/(s4^6*t4^4)").expect("literal");
                    rep.push(Check::exact("m=4 K = -1/(2s)", set.k_delta.equals(&k4), set.k_delta.pretty()));
                    rep.push(Check::exact("m=4 H = s^(-3/2) t^(-1)", set.h_delta.equals(&h4), set.h_delta.pretty()));
                }
            }
            Err(e) => rep.push(Check::failed(format!("m={m} listing"), e.to_string())),
        }
    }

    let twelfth = -BigRational::new(BigInt::from(1), BigInt::from(12));
    for m in (4u32..=12).step_by(2) {
        let closed = -constant_c(2, m) / BigInt::from(4) + constant_c(3, m) * BigInt::from(2) / BigInt::from(3 * m);
        let expected = expected_scalar_constant(m);
        let derived = ms.scalar_constant(m);
        rep.push(Check::exact(
            format!("m={m} -c(2,m)/4 + 2c(3,m)/(3m) = -Gamma(m/2)/12"),
            closed == expected && derived == expected,
            format!("closed {closed}, derived {derived}"),
        ));
        let nc = normalization_constant(m);
        let coeff = derived * nc.inv_gamma.clone();
        let direct = (0..m / 2).fold(1.0, |a, _| a / (4.0 * std::f64::consts::PI));
        rep.push(Check::exact(format!("m={m} c(m)/Gamma(m/2) = -1/12"), coeff == twelfth, coeff.to_string()));
        rep.push(Check::numeric(
            format!("m={m} prefactor = (4pi)^(-m/2)"),
            ((nc.four_pi_power - direct) / direct).abs(),
            1e-14,
            format!("{:.6e}", nc.four_pi_power),
        ));
    }

    let mut no = verify_normal_order(
        &ms.integrated,
        cfg.normal_order_instances,
        cfg.normal_order_size,
        cfg.seed,
        cfg.tol(1e-10),
    );
    rep.checks.append(&mut no.checks);
    rep
}

/// Both internal relations in each configured dimension.
pub fn relations(cfg: &VerifyConfig) -> VerificationReport {
    let mut rep = VerificationReport::new("relations");
    let parts: Vec<VerificationReport> = cfg
        .relation_dims
        .par_iter()
        .map(|&m| {
            verify_relations(m, cfg.samples, cfg.tol(1e-10), cfg.seed).unwrap_or_else(|e| {
                let mut r = VerificationReport::new("relations");
                r.push(Check::failed(format!("m={m} relations"), e.to_string()));
                r
            })
        })
        .collect();
    for p in parts {
        rep.extend(p);
    }
    rep
}

pub fn clifford(cfg: &VerifyConfig) -> VerificationReport {
    let mut rep = VerificationReport::new("clifford");
    for &m in &cfg.sphere_dims {
        rep.extend(verify_sphere_rules(m, cfg.seed));
    }
    rep
}

/// Random resolvent families compared between the λ-integral and the
/// closed-form basis value.
pub fn quadrature(cfg: &VerifyConfig) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let cases: Vec<(u32, u32, u32, u32, f64, f64)> = (0..cfg.quadrature_cases)
        .map(|_| {
            let (p, q) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let l = if rng.gen_bool(0.5) { rng.gen_range(1..=2) } else { 0 };
            let m = 2 * rng.gen_range(2..=6);
            (p, q, l, m, rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0))
        })
        .collect();
    let errs: Vec<(f64, String)> = cases
        .par_iter()
        .map(|&(p, q, l, m, s, t)| {
            let basis = if l == 0 { Basis::K { p, q } } else { Basis::H { p, q, l } };
            let label = format!("{basis} m={m} s={s:.4} t={t:.4}");
            match quadrature_oracle(p, q, l, m, s, t) {
                Ok(v) => ((v - closed_form_basis(basis, m, s, t)).abs(), label),
                Err(e) => (f64::INFINITY, format!("{label}: {e}")),
            }
        })
        .collect();
    let (e, at) = errs.into_iter().fold((0.0, String::new()), |a, b| if !(b.0 <= a.0) { b } else { a });
    let mut rep = VerificationReport::new("quadrature");
    rep.push(Check::numeric(
        "quadrature = closed-form basis value (absolute)",
        e,
        cfg.tol(1e-8),
        format!("{} cases, worst {at}", cfg.quadrature_cases),
    ));
    rep
}
