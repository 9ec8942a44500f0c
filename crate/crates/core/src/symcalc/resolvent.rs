//! Symbols of the perturbed Laplacian and the parametrix recursion
//! `b0 = (k²|ξ|² − λ)⁻¹`, `b1`, `b2`.

use num_traits::One;

use super::atom::{Atom, AtomKind};
use super::term::{SymbolSum, SymbolTerm};
use super::widom::widom_product;
use super::SymbolError;
use crate::exact::{ratio, GaussRational};
use crate::fixtures;

/// Homogeneous parts of the symbol of `k Δ k − λ`, by ξ-degree.
#[derive(Clone, Debug)]
pub struct PSymbols {
    pub p2: SymbolSum,
    pub p1: SymbolSum,
    pub p0: SymbolSum,
}

/// `p2 = k²|ξ|² − λ` (stored as the inverse of `B0`),
/// `p1 = −i k ∇_a k Dσ_a σ`, `p0 = ¼ k² S`.
pub fn build_p_symbols() -> PSymbols {
    use AtomKind::*;
    let p2 = SymbolSum::single(SymbolTerm::new(GaussRational::one(), [Atom::scalar(P2)]));
    let p1 = SymbolSum::single(SymbolTerm::new(
        -GaussRational::i(),
        [Atom::scalar(K), Atom::new(GradK, &[0]), Atom::new(DSigmaD, &[0]), Atom::scalar(SigmaD)],
    ));
    let p0 = SymbolSum::single(SymbolTerm::new(
        ratio(1, 4).into(),
        [Atom::scalar(K), Atom::scalar(K), Atom::scalar(Scal)],
    ));
    PSymbols { p2, p1, p0 }
}

pub fn resolvent_b0() -> SymbolSum {
    SymbolSum::single(SymbolTerm::new(GaussRational::one(), [Atom::scalar(AtomKind::B0)]))
}

fn minus_b0() -> SymbolSum {
    resolvent_b0().scale(&-GaussRational::one())
}

/// `b1 = (b0 p1 + a1(b0, p2))(−b0)` without the reference comparison.
pub fn resolvent_b1_unchecked() -> Result<SymbolSum, SymbolError> {
    let p = build_p_symbols();
    let b0 = resolvent_b0();
    let inner = b0.mul(&p.p1).add(&widom_product(1, &b0, &p.p2)?);
    Ok(inner.mul(&minus_b0()))
}

/// `b1`, compared term by term with the stored reference before returning.
pub fn resolvent_b1() -> Result<SymbolSum, SymbolError> {
    let b1 = resolvent_b1_unchecked()?;
    let expected = fixtures::reference_b1();
    if b1 != expected {
        return Err(SymbolError::ReferenceMismatch {
            expected: expected.to_string(),
            found: b1.to_string(),
        });
    }
    Ok(b1)
}

/// The five contributions to `b2`, each already multiplied by `−b0`.
pub fn resolvent_b2_parts() -> Result<Vec<(&'static str, SymbolSum)>, SymbolError> {
    let p = build_p_symbols();
    let b0 = resolvent_b0();
    let b1 = resolvent_b1()?;
    let parts = [
        ("a0(b0,p0)", widom_product(0, &b0, &p.p0)?),
        ("a0(b1,p1)", widom_product(0, &b1, &p.p1)?),
        ("a1(b0,p1)", widom_product(1, &b0, &p.p1)?),
        ("a1(b1,p2)", widom_product(1, &b1, &p.p2)?),
        ("a2(b0,p2)", widom_product(2, &b0, &p.p2)?),
    ];
    let mb0 = minus_b0();
    Ok(parts.into_iter().map(|(name, s)| (name, s.mul(&mb0))).collect())
}

/// `b2`; every term must be homogeneous of ξ-degree −4.
pub fn resolvent_b2() -> Result<SymbolSum, SymbolError> {
    let b2: SymbolSum = resolvent_b2_parts()?
        .into_iter()
        .flat_map(|(_, s)| s.terms().to_vec())
        .collect();
    check_grading(&b2, -4)?;
    Ok(b2)
}

fn check_grading(s: &SymbolSum, expected: i32) -> Result<(), SymbolError> {
    match s.terms().iter().find(|t| t.xi_degree() != expected) {
        Some(t) => Err(SymbolError::GradingViolation {
            term: t.to_string(),
            degree: t.xi_degree(),
            expected,
        }),
        None => Ok(()),
    }
}

/// Parts of degree 0, −1, −2 of `b ∘ p` with `b = b0 + b1 + b2`, using the
/// product terms up to `a2`. A correct parametrix gives `[1, 0, 0]`.
pub fn reconstruction_residual() -> Result<[SymbolSum; 3], SymbolError> {
    let p = build_p_symbols();
    let b0 = resolvent_b0();
    let b1 = resolvent_b1()?;
    let b2 = resolvent_b2()?;
    let bs = [b0, b1, b2];
    let ps = [p.p2, p.p1, p.p0];
    let mut total = SymbolSum::zero();
    for (jb, b) in bs.iter().enumerate() {
        for (jp, q) in ps.iter().enumerate() {
            for order in 0..=2u32 {
                // degree of a_order(b_jb, p_(2-jp)) is −jb − jp − order
                if jb + jp + order as usize <= 2 {
                    total = total.add(&widom_product(order, b, q)?);
                }
            }
        }
    }
    Ok([total.of_degree(0), total.of_degree(-1), total.of_degree(-2)])
}

/// `a0 + a1 + a2` applied to `(σ_D, σ_D)`; equals `|ξ|² + ¼ S`.
pub fn dirac_square_symbol() -> Result<SymbolSum, SymbolError> {
    let sigma = SymbolSum::single(SymbolTerm::new(
        GaussRational::one(),
        [Atom::scalar(AtomKind::SigmaD)],
    ));
    let mut out = SymbolSum::zero();
    for j in 0..=2 {
        out = out.add(&widom_product(j, &sigma, &sigma)?);
    }
    Ok(out)
}
