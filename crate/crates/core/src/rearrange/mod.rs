//! Normal ordering of conformal-factor powers, the spectral basis
//! functions produced by the contour integral, and assembly of the master
//! functions `F(u, s; m)` and `G(u, s, t; m)`.

mod oracle;

pub use oracle::{closed_form_basis, quadrature_oracle};

use std::fmt::{self, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cosphere::{integrate_sphere, CosphereError, IntegratedTerm, OutputKind};
use crate::exact::{GaussRational, Monomial, Var};
use crate::quadrature::QuadratureNotConverged;
use crate::symcalc::{resolvent_b2, AtomKind, SymbolError};
use crate::{Polynomial, RationalFunction};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RearrangeError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Cosphere(#[from] CosphereError),
    #[error("term `{term}` violates homogeneity: {reason}")]
    HomogeneityViolation { term: String, reason: String },
    #[error(transparent)]
    Quadrature(#[from] QuadratureNotConverged),
}

/// Integrated term with all powers of `k` moved to the far left.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalTerm {
    pub coeff: RationalFunction,
    /// Power `ν` of `|ξ|`.
    pub xi_power: u32,
    /// Total power `μ` of `k`.
    pub k_power: u32,
    /// Resolvent powers before, between and after the insertions.
    pub b0_exponents: Vec<u32>,
    pub kind: OutputKind,
    /// Per insertion, the number of `k` factors moved across it; each
    /// contributes `Δ^{1/2}` acting on that insertion.
    pub halfweights: Vec<u32>,
}

impl CanonicalTerm {
    /// Number of conformal-factor insertions (`∇²k` counts once).
    pub fn arity(&self) -> u32 {
        match self.kind {
            OutputKind::Hess => 1,
            OutputKind::GradGrad | OutputKind::GradSq => 2,
            OutputKind::ScalTerm => 0,
        }
    }

    /// `ν = 2Σp − 4` and `μ = ν + 2 − arity`.
    pub fn check_homogeneity(&self) -> Result<(), String> {
        let total: u32 = self.b0_exponents.iter().sum();
        let nu = 2 * total as i64 - 4;
        if nu != self.xi_power as i64 {
            return Err(format!("xi power {} but resolvent powers give {nu}", self.xi_power));
        }
        let mu = nu + 2 - self.arity() as i64;
        if mu != self.k_power as i64 {
            return Err(format!("k power {} but homogeneity requires {mu}", self.k_power));
        }
        if self.b0_exponents.len() != self.arity() as usize + 1 {
            return Err("resolvent runs do not match the insertions".into());
        }
        if self.b0_exponents[0] == 0 || *self.b0_exponents.last().expect("nonempty") == 0 {
            return Err("leading and trailing resolvent powers must be positive".into());
        }
        Ok(())
    }

    /// Power of `k` left after the radial integral: `μ − ν − m`, i.e.
    /// `1 − m`, `−m` or `2 − m` for one, two or no insertions.
    pub fn global_k_offset(&self) -> i64 {
        self.k_power as i64 - self.xi_power as i64
    }
}

/// Moves every `k` to the left; a `k` passing an insertion `X` turns it
/// into `k⁻¹Xk = Δ^{1/2}(X)`.
pub fn normal_order(t: &IntegratedTerm) -> CanonicalTerm {
    let mut k_power = 0;
    let mut halfweights: Vec<u32> = Vec::new();
    let mut b0_exponents = Vec::new();
    let mut run = 0;
    for a in &t.word {
        match a.kind {
            AtomKind::K => {
                k_power += 1;
                halfweights.iter_mut().for_each(|w| *w += 1);
            }
            AtomKind::B0 => run += 1,
            _ => {
                b0_exponents.push(run);
                run = 0;
                halfweights.push(0);
            }
        }
    }
    b0_exponents.push(run);
    CanonicalTerm {
        coeff: t.coeff.clone(),
        xi_power: 2 * t.xi2_power,
        k_power,
        b0_exponents,
        kind: t.kind,
        halfweights,
    }
}

/// Resolvent-power family produced by the contour integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "type")]
pub enum Basis {
    /// `(1 − u)^{−p} (s − u)^{−q}`
    K { p: u32, q: u32 },
    /// `(1 − u)^{−p} (s − u)^{−q} (st − u)^{−l}`
    H { p: u32, q: u32, l: u32 },
    /// `(1 − u)^{−p} (st − u)^{−l}`: the one-variable family at the product
    /// of the two modular variables, from adjacent `(∇k)²`.
    KProduct { p: u32, l: u32 },
    /// Scalar constant `c_(p,m)`.
    C { p: u32 },
}

impl Basis {
    /// The integrand in `u`; `None` for the scalar family.
    pub fn integrand(&self) -> Option<RationalFunction> {
        let s = Polynomial::monomial(Monomial::var(Var::S4, 4), GaussRational::one());
        let st = Polynomial::monomial(
            Monomial::var(Var::S4, 4).mul(&Monomial::var(Var::T4, 4)),
            GaussRational::one(),
        );
        let u = Polynomial::var(Var::U);
        let shifted = |c: Polynomial| c - u.clone();
        let (p, q, l) = match *self {
            Basis::K { p, q } => (p, q, 0),
            Basis::H { p, q, l } => (p, q, l),
            Basis::KProduct { p, l } => (p, 0, l),
            Basis::C { .. } => return None,
        };
        let den = shifted(Polynomial::one()).pow(p) * shifted(s).pow(q) * shifted(st).pow(l);
        Some(RationalFunction::new(Polynomial::one(), den).expect("nonzero"))
    }

    pub fn exponents(&self) -> (u32, u32, u32) {
        match *self {
            Basis::K { p, q } => (p, q, 0),
            Basis::H { p, q, l } => (p, q, l),
            Basis::KProduct { p, l } => (p, 0, l),
            Basis::C { p } => (p, 0, 0),
        }
    }
}

impl Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::K { p, q } => write!(f, "K({p},{q})(s)"),
            Basis::H { p, q, l } => write!(f, "H({p},{q},{l})(s,t)"),
            Basis::KProduct { p, l } => write!(f, "K({p},{l})(st)"),
            Basis::C { p } => write!(f, "c({p})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralFunction {
    /// Rational in `m`, `s4`, `t4`; modular half-weights contribute
    /// `s4²` or `t4²` each.
    pub prefactor: RationalFunction,
    pub basis: Basis,
    pub kind: OutputKind,
}

impl Display for SpectralFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: ({}) * {}", self.kind, self.prefactor.pretty(), self.basis)
    }
}

/// Folds the modular half-weights into the prefactor and attaches the
/// resolvent-power family; the overall factor ½ is left out.
pub fn to_spectral(t: &CanonicalTerm) -> Result<SpectralFunction, RearrangeError> {
    t.check_homogeneity().map_err(|reason| RearrangeError::HomogeneityViolation {
        term: format!("{t:?}"),
        reason,
    })?;
    let e = &t.b0_exponents;
    let w = &t.halfweights;
    let root = |v: Var, n: u32| {
        RationalFunction::monomial(Monomial::var(v, 2 * n), GaussRational::one())
    };
    let (weight, basis) = match t.kind {
        OutputKind::Hess => (root(Var::S4, w[0]), Basis::K { p: e[0], q: e[1] }),
        OutputKind::GradGrad => (
            root(Var::S4, w[0]) * root(Var::T4, w[1]),
            Basis::H { p: e[0], q: e[1], l: e[2] },
        ),
        OutputKind::GradSq => (
            root(Var::S4, w[0]) * root(Var::T4, w[1]),
            Basis::KProduct { p: e[0], l: e[2] },
        ),
        OutputKind::ScalTerm => (RationalFunction::one(), Basis::C { p: e[0] }),
    };
    Ok(SpectralFunction { prefactor: t.coeff.clone() * weight, basis, kind: t.kind })
}

/// `c_(p,m) = (p − 2 + (m−2)/2)! / (p − 1)!`.
pub fn constant_c(p: u32, m: u32) -> BigRational {
    assert!(p >= 1 && m >= 4 && m % 2 == 0);
    let fact = |n: u32| (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k));
    let top = p as i64 - 2 + (m as i64 - 2) / 2;
    assert!(top >= 0, "c_(1,{m}) is not defined");
    BigRational::new(fact(top as u32), fact(p - 1))
}

/// `Γ(m/2) = (m/2 − 1)!` for even `m`.
pub fn gamma_half(m: u32) -> BigInt {
    (1..m / 2).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// Overall constant `(4π)^{−m/2} / Γ(m/2)`, kept as its two factors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Normalization {
    pub four_pi_power: f64,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub inv_gamma: BigRational,
}

pub fn normalization_constant(m: u32) -> Normalization {
    Normalization {
        four_pi_power: (4.0 * std::f64::consts::PI).powf(-(m as f64) / 2.0),
        inv_gamma: BigRational::new(BigInt::one(), gamma_half(m)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Master {
    F,
    G,
}

/// Sums `prefactor · basis` over the spectral functions feeding the
/// chosen master: `Hess` for `F`, `GradGrad` and `GradSq` for `G`.
pub fn assemble_master(kind: Master, fs: &[SpectralFunction]) -> RationalFunction {
    let wanted = |k: OutputKind| match kind {
        Master::F => k == OutputKind::Hess,
        Master::G => matches!(k, OutputKind::GradGrad | OutputKind::GradSq),
    };
    let chosen: Vec<&SpectralFunction> = fs.iter().filter(|f| wanted(f.kind)).collect();
    // Common denominator (1−u)^P (s−u)^Q (st−u)^L.
    let (mut pm, mut qm, mut lm) = (0, 0, 0);
    for f in &chosen {
        let (p, q, l) = f.basis.exponents();
        pm = pm.max(p);
        qm = qm.max(q);
        lm = lm.max(l);
    }
    let u = Polynomial::var(Var::U);
    let s = Polynomial::monomial(Monomial::var(Var::S4, 4), GaussRational::one());
    let st = Polynomial::monomial(
        Monomial::var(Var::S4, 4).mul(&Monomial::var(Var::T4, 4)),
        GaussRational::one(),
    );
    let (a, b, c) = (Polynomial::one() - u.clone(), s - u.clone(), st - u);
    let mut num = RationalFunction::zero();
    for f in chosen {
        let (p, q, l) = f.basis.exponents();
        let cof = a.pow(pm - p) * b.pow(qm - q) * c.pow(lm - l);
        num = num + f.prefactor.clone() * RationalFunction::from_poly(cof);
    }
    let den = a.pow(pm) * b.pow(qm) * c.pow(lm);
    num * RationalFunction::new(Polynomial::one(), den).expect("nonzero")
}

/// Coefficient of the scalar curvature, `Σ coeff · c_(p,m)`, at even `m`.
pub fn scalar_constant(fs: &[SpectralFunction], m: u32) -> BigRational {
    let mut total = BigRational::zero();
    for f in fs {
        if let Basis::C { p } = f.basis {
            let c = f
                .prefactor
                .substitute(Var::M, &RationalFunction::integer(m as i64))
                .expect("m is not a pole")
                .as_constant()
                .expect("constant in m");
            assert!(c.im.is_zero(), "complex scalar coefficient");
            total += c.re * constant_c(p, m);
        }
    }
    total
}

/// Output of the full symbolic pipeline.
#[derive(Clone, Debug)]
pub struct Masters {
    pub f: RationalFunction,
    pub g: RationalFunction,
    pub spectral: Vec<SpectralFunction>,
    pub canonical: Vec<CanonicalTerm>,
    /// Fibre-integrated terms that `canonical` was normal-ordered from.
    pub integrated: Vec<IntegratedTerm>,
    pub b2_terms: usize,
    pub antisymmetric_dropped: usize,
}

impl Masters {
    pub fn scalar_constant(&self, m: u32) -> BigRational {
        scalar_constant(&self.spectral, m)
    }
}

/// `b2` → cosphere integration → normal ordering → spectral functions →
/// `F` and `G`.
pub fn derive_masters() -> Result<Masters, RearrangeError> {
    let b2 = resolvent_b2()?;
    let integrated = integrate_sphere(&b2)?;
    let canonical: Vec<CanonicalTerm> = integrated.terms.iter().map(normal_order).collect();
    let spectral = canonical.iter().map(to_spectral).collect::<Result<Vec<_>, _>>()?;
    Ok(Masters {
        f: assemble_master(Master::F, &spectral),
        g: assemble_master(Master::G, &spectral),
        spectral,
        canonical,
        b2_terms: b2.len(),
        antisymmetric_dropped: integrated.antisymmetric_dropped,
        integrated: integrated.terms,
    })
}
