//! Integration over the unit cosphere: each ξ/Clifford pattern left in a
//! `b2` term is replaced by a scalar factor rational in `m`, contracting the
//! free labels of the conformal-factor insertions with the metric.
//!
//! The common factor `Vol(S^{m−1})` is not included here.

mod clifford;
mod verify;

pub use clifford::{clifford_gammas, GammaMatrix};
pub use verify::{random_curvature, verify_sphere_rules, Curvature};

use std::collections::BTreeMap;
use std::fmt::{self, Display};

use serde::Serialize;
use thiserror::Error;

use crate::exact::parse_expr;
use crate::symcalc::{Atom, AtomKind, Label, SymbolSum, SymbolTerm};
use crate::RationalFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SpherePattern {
    /// `D_a|ξ|² D_b|ξ|²` with both labels on insertions.
    DXi2PairOnInsertions,
    /// `D²_ab|ξ|²` with both labels on insertions.
    D2Xi2OnInsertions,
    DXi2DXi2Grad2Xi2,
    D2Xi2Grad2Xi2,
    DXi2D2Xi2Grad3Ell,
    DSigmaDPair,
    DXi2DSigmaDSigmaD,
    DSigmaDSigmaDSquared,
    DXi2DXi2Grad2Tau,
    DSigmaDDSigmaDGrad2Tau,
    /// No ξ-dependent atom besides powers of `|ξ|²`.
    Plain,
}

impl SpherePattern {
    pub const ALL: [SpherePattern; 11] = [
        SpherePattern::DXi2PairOnInsertions,
        SpherePattern::D2Xi2OnInsertions,
        SpherePattern::DXi2DXi2Grad2Xi2,
        SpherePattern::D2Xi2Grad2Xi2,
        SpherePattern::DXi2D2Xi2Grad3Ell,
        SpherePattern::DSigmaDPair,
        SpherePattern::DXi2DSigmaDSigmaD,
        SpherePattern::DSigmaDSigmaDSquared,
        SpherePattern::DXi2DXi2Grad2Tau,
        SpherePattern::DSigmaDDSigmaDGrad2Tau,
        SpherePattern::Plain,
    ];

    pub fn name(self) -> &'static str {
        use SpherePattern::*;
        match self {
            DXi2PairOnInsertions => "DXi2_pair_on_insertions",
            D2Xi2OnInsertions => "D2Xi2_on_insertions",
            DXi2DXi2Grad2Xi2 => "DXi2_DXi2_Grad2Xi2",
            D2Xi2Grad2Xi2 => "D2Xi2_Grad2Xi2",
            DXi2D2Xi2Grad3Ell => "DXi2_D2Xi2_Grad3Ell",
            DSigmaDPair => "DSigmaD_pair",
            DXi2DSigmaDSigmaD => "DXi2_DSigmaD_SigmaD",
            DSigmaDSigmaDSquared => "DSigmaD_SigmaD_squared",
            DXi2DXi2Grad2Tau => "DXi2_DXi2_Grad2Tau",
            DSigmaDDSigmaDGrad2Tau => "DSigmaD_DSigmaD_Grad2Tau",
            Plain => "plain",
        }
    }
}

impl Display for SpherePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What the contracted insertions of an integrated term look like.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum OutputKind {
    /// `∇²k` contracted with the metric.
    Hess,
    /// `∇k ⋯ ∇k` contracted, with resolvent factors in between.
    GradGrad,
    /// `(∇k)²` contracted, adjacent in the word.
    GradSq,
    /// Scalar curvature times powers of `k` and `b0`.
    ScalTerm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphereRule {
    pub pattern: SpherePattern,
    /// Symmetric part of the integral over the unit sphere; for
    /// curvature rows this multiplies the scalar curvature.
    pub factor: RationalFunction,
    /// Power of `|ξ|²` restored after integrating a quadratic moment.
    pub xi2_increment: u32,
    /// The rule turns the pattern into the scalar curvature.
    pub scal: bool,
    /// The exact integral also has a part antisymmetric in the two
    /// insertion labels, which is discarded.
    pub antisymmetric_part: bool,
}

/// The substitution table.
pub fn sphere_rules() -> Vec<SphereRule> {
    use SpherePattern::*;
    let rule = |pattern, factor: &str, xi2_increment, scal, antisymmetric_part| SphereRule {
        pattern,
        factor: parse_expr(factor).expect("factor"),
        xi2_increment,
        scal,
        antisymmetric_part,
    };
    vec![
        rule(DXi2PairOnInsertions, "4/m", 1, false, false),
        rule(D2Xi2OnInsertions, "2", 0, false, false),
        rule(DXi2DXi2Grad2Xi2, "0", 1, false, false),
        rule(D2Xi2Grad2Xi2, "4/(3*m)", 1, true, false),
        rule(DXi2D2Xi2Grad3Ell, "-8/(3*m)", 1, true, false),
        rule(DSigmaDPair, "1", 0, false, true),
        rule(DXi2DSigmaDSigmaD, "2/m", 1, false, true),
        rule(DSigmaDSigmaDSquared, "(2-m)/m", 1, false, true),
        rule(DXi2DXi2Grad2Tau, "0", 1, false, false),
        rule(DSigmaDDSigmaDGrad2Tau, "-1/4", 0, true, false),
        rule(Plain, "1", 0, false, false),
    ]
}

pub fn sphere_rule(p: SpherePattern) -> SphereRule {
    sphere_rules().into_iter().find(|r| r.pattern == p).expect("every pattern has a rule")
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CosphereError {
    #[error("no sphere rule for term `{0}`")]
    UnknownPattern(String),
    #[error("sphere rule {pattern} disagrees with its derivation: table {table}, derived {derived}")]
    RuleMismatch { pattern: SpherePattern, table: String, derived: String },
}

/// Pattern of a term, read off its Clifford and non-`|ξ|²` central atoms.
pub fn classify(t: &SymbolTerm) -> Result<SpherePattern, CosphereError> {
    use AtomKind::*;
    use SpherePattern::*;
    let central: Vec<AtomKind> =
        t.central.iter().map(|a| a.kind).filter(|k| !matches!(k, Xi2 | Scal)).collect();
    let clif: Vec<AtomKind> = t.clif.iter().map(|a| a.kind).collect();
    let scal = t.contains(Scal);
    let p = match (central.as_slice(), clif.as_slice()) {
        ([], []) if scal => Plain,
        ([DXi2, DXi2], []) => DXi2PairOnInsertions,
        ([D2Xi2], []) => D2Xi2OnInsertions,
        ([DXi2, DXi2, Grad2Xi2], []) => DXi2DXi2Grad2Xi2,
        ([D2Xi2, Grad2Xi2], []) => D2Xi2Grad2Xi2,
        ([DXi2, D2Xi2, Grad3Ell], []) => DXi2D2Xi2Grad3Ell,
        ([], [DSigmaD, DSigmaD]) => DSigmaDPair,
        ([DXi2], [DSigmaD, SigmaD] | [SigmaD, DSigmaD]) => DXi2DSigmaDSigmaD,
        ([], [DSigmaD, SigmaD, DSigmaD, SigmaD]) => DSigmaDSigmaDSquared,
        ([DXi2, DXi2, Grad2Tau], []) => DXi2DXi2Grad2Tau,
        ([Grad2Tau], [DSigmaD, DSigmaD]) => DSigmaDDSigmaDGrad2Tau,
        _ => return Err(CosphereError::UnknownPattern(t.to_string())),
    };
    if scal && p != Plain {
        return Err(CosphereError::UnknownPattern(t.to_string()));
    }
    Ok(p)
}

/// A term after fibre integration: `coeff(m) · |ξ|^{2·xi2_power} · word`.
///
/// Contracted insertion labels are all renamed to `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegratedTerm {
    pub coeff: RationalFunction,
    pub xi2_power: u32,
    pub word: Vec<Atom>,
    pub kind: OutputKind,
}

impl IntegratedTerm {
    pub fn insertions(&self) -> impl Iterator<Item = &Atom> {
        self.word.iter().filter(|a| matches!(a.kind, AtomKind::GradK | AtomKind::Grad2K))
    }
}

impl Display for IntegratedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) * |xi|^{}", self.coeff.pretty(), 2 * self.xi2_power)?;
        for a in &self.word {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

/// Result of [`integrate_sphere`]: like terms merged, in deterministic order.
#[derive(Clone, Debug, Default)]
pub struct IntegratedSum {
    pub terms: Vec<IntegratedTerm>,
    /// Number of input terms whose antisymmetric part was discarded.
    pub antisymmetric_dropped: usize,
    /// Input term count per pattern.
    pub pattern_counts: BTreeMap<SpherePattern, usize>,
}

fn output_kind(word: &[Atom]) -> OutputKind {
    let ins: Vec<usize> = word
        .iter()
        .enumerate()
        .filter(|(_, a)| matches!(a.kind, AtomKind::GradK | AtomKind::Grad2K))
        .map(|(k, _)| k)
        .collect();
    match ins.as_slice() {
        [] => OutputKind::ScalTerm,
        [_] => OutputKind::Hess,
        [i, j] if j - i == 1 => OutputKind::GradSq,
        _ => OutputKind::GradGrad,
    }
}

/// The labels that the integrated pattern contracts with the metric.
fn free_labels(t: &SymbolTerm, p: SpherePattern) -> Vec<Label> {
    use AtomKind::*;
    let labels_of = |kinds: &[AtomKind]| -> Vec<Label> {
        t.central
            .iter()
            .chain(&t.clif)
            .filter(|a| kinds.contains(&a.kind))
            .flat_map(|a| a.labels().to_vec())
            .collect()
    };
    match p {
        SpherePattern::DXi2PairOnInsertions => labels_of(&[DXi2]),
        SpherePattern::D2Xi2OnInsertions => labels_of(&[D2Xi2]),
        SpherePattern::DSigmaDPair | SpherePattern::DSigmaDSigmaDSquared => labels_of(&[DSigmaD]),
        SpherePattern::DXi2DSigmaDSigmaD => labels_of(&[DXi2, DSigmaD]),
        _ => Vec::new(),
    }
}

/// Integrates one term; `None` if its rule factor vanishes.
pub fn integrate_term(t: &SymbolTerm) -> Result<Option<(IntegratedTerm, SphereRule)>, CosphereError> {
    let p = classify(t)?;
    let rule = sphere_rule(p);
    if rule.factor.is_zero() {
        return Ok(None);
    }
    let mut ins: Vec<Label> = t.alg.iter().flat_map(|a| a.labels().to_vec()).collect();
    let mut free = free_labels(t, p);
    ins.sort_unstable();
    free.sort_unstable();
    if ins != free || (rule.scal && !ins.is_empty()) {
        return Err(CosphereError::UnknownPattern(t.to_string()));
    }
    let word: Vec<Atom> = t
        .alg
        .iter()
        .map(|a| {
            let mut a = *a;
            a.labels_mut().iter_mut().for_each(|l| *l = 0);
            a
        })
        .collect();
    let coeff = RationalFunction::constant(t.coeff.clone()) * rule.factor.clone();
    let xi2_power = t.count(AtomKind::Xi2) as u32 + rule.xi2_increment;
    let kind = output_kind(&word);
    Ok(Some((IntegratedTerm { coeff, xi2_power, word, kind }, rule)))
}

/// Integrates every term of `s` over the unit cosphere.
pub fn integrate_sphere(s: &SymbolSum) -> Result<IntegratedSum, CosphereError> {
    let mut acc: BTreeMap<(Vec<Atom>, u32), RationalFunction> = BTreeMap::new();
    let mut out = IntegratedSum::default();
    for t in s.terms() {
        *out.pattern_counts.entry(classify(t)?).or_default() += 1;
        let Some((it, rule)) = integrate_term(t)? else { continue };
        if rule.antisymmetric_part && it.kind != OutputKind::Hess {
            out.antisymmetric_dropped += 1;
        }
        let e = acc.entry((it.word, it.xi2_power)).or_insert_with(RationalFunction::zero);
        *e = std::mem::replace(e, RationalFunction::zero()) + it.coeff;
    }
    out.terms = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((word, xi2_power), coeff)| {
            let kind = output_kind(&word);
            IntegratedTerm { coeff, xi2_power, word, kind }
        })
        .collect();
    Ok(out)
}
