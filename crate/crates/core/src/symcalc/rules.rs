//! Vertical (`D`, cotangent) and horizontal (`∇`, base) differentiation of
//! symbol words, applied by the Leibniz rule.

use super::atom::{Atom, AtomKind, Label};
use super::term::{SymbolSum, SymbolTerm};
use super::SymbolError;
use crate::exact::GaussRational;

type Replacement = Vec<(i64, Vec<Atom>)>;

fn a(kind: AtomKind) -> Atom {
    Atom::scalar(kind)
}

fn vertical_rule(atom: &Atom, j: Label) -> Replacement {
    use AtomKind::*;
    match atom.kind {
        B0 => vec![(-1, vec![a(K), a(K), a(B0), a(B0), Atom::new(DXi2, &[j])])],
        P2 => vec![(1, vec![a(K), a(K), Atom::new(DXi2, &[j])])],
        Xi2 => vec![(1, vec![Atom::new(DXi2, &[j])])],
        DXi2 => vec![(1, vec![Atom::new(D2Xi2, &[atom.labels()[0], j])])],
        SigmaD => vec![(1, vec![Atom::new(DSigmaD, &[j])])],
        K | GradK | Grad2K | DSigmaD | D2Xi2 | GradXi2 | Grad2Xi2 | Grad2Tau | Grad3Ell | Scal => {
            vec![]
        }
    }
}

fn horizontal_rule(atom: &Atom, j: Label) -> Result<Replacement, SymbolError> {
    use AtomKind::*;
    let xi2 = a(Xi2);
    Ok(match atom.kind {
        K => vec![(1, vec![Atom::new(GradK, &[j])])],
        GradK => vec![(1, vec![Atom::new(Grad2K, &[j, atom.labels()[0]])])],
        // ∇(k²|ξ|² − λ)⁻¹ = −b0 (∇k k + k ∇k) |ξ|² b0 − b0 k² (∇|ξ|²) b0
        B0 => vec![
            (-1, vec![a(B0), Atom::new(GradK, &[j]), a(K), a(B0), xi2]),
            (-1, vec![a(B0), a(K), Atom::new(GradK, &[j]), a(B0), xi2]),
            (-1, vec![a(B0), a(K), a(K), a(B0), Atom::new(GradXi2, &[j])]),
        ],
        P2 => vec![
            (1, vec![Atom::new(GradK, &[j]), a(K), xi2]),
            (1, vec![a(K), Atom::new(GradK, &[j]), xi2]),
            (1, vec![a(K), a(K), Atom::new(GradXi2, &[j])]),
        ],
        Xi2 => vec![(1, vec![Atom::new(GradXi2, &[j])])],
        GradXi2 => vec![(1, vec![Atom::new(Grad2Xi2, &[j, atom.labels()[0]])])],
        SigmaD | DSigmaD | DXi2 | D2Xi2 | Scal => vec![],
        Grad2K | Grad2Xi2 | Grad2Tau | Grad3Ell => {
            return Err(SymbolError::NoRule { op: "horizontal", atom: atom.kind })
        }
    })
}

/// Leibniz expansion over the full word; returns raw (non-canonical) terms.
fn leibniz(
    t: &SymbolTerm,
    mut rule: impl FnMut(&Atom) -> Result<Replacement, SymbolError>,
) -> Result<Vec<SymbolTerm>, SymbolError> {
    let mut out = Vec::new();
    let word: Vec<Atom> = t.atoms().copied().collect();
    for (pos, atom) in word.iter().enumerate() {
        for (c, rep) in rule(atom)? {
            let atoms = word[..pos].iter().chain(&rep).chain(&word[pos + 1..]).copied();
            // Splitting by class preserves the in-class order of the
            // replacement, which is all the noncommutative structure needed.
            let coeff = t.coeff.clone() * GaussRational::from(c);
            out.push(SymbolTerm::new(coeff, atoms));
        }
    }
    Ok(out)
}

pub(crate) fn vertical_term(t: &SymbolTerm, j: Label) -> Vec<SymbolTerm> {
    leibniz(t, |x| Ok(vertical_rule(x, j))).expect("vertical rules are total")
}

pub(crate) fn horizontal_raw(t: &SymbolTerm, j: Label) -> Result<Vec<SymbolTerm>, SymbolError> {
    leibniz(t, |x| horizontal_rule(x, j))
}

/// Restricts to the diagonal, where `∇|ξ|²` vanishes.
pub(crate) fn on_diagonal(ts: Vec<SymbolTerm>) -> Vec<SymbolTerm> {
    ts.into_iter().filter(|t| !t.contains(AtomKind::GradXi2)).collect()
}

/// Vertical differential; each term receives a fresh label one past its own.
pub fn vertical_diff(s: &SymbolSum) -> SymbolSum {
    s.terms().iter().flat_map(|t| vertical_term(t, t.label_bound())).collect()
}

/// Horizontal differential evaluated on the diagonal.
pub fn horizontal_diff(s: &SymbolSum) -> Result<SymbolSum, SymbolError> {
    let mut out = Vec::new();
    for t in s.terms() {
        out.extend(on_diagonal(horizontal_raw(t, t.label_bound())?));
    }
    Ok(out.into_iter().collect())
}

/// Second horizontal differential `∇_j ∇_i` on the diagonal; unlike two
/// applications of [`horizontal_diff`] this keeps `∇²|ξ|²`.
pub fn horizontal_diff2(s: &SymbolSum) -> Result<SymbolSum, SymbolError> {
    let mut out = Vec::new();
    for t in s.terms() {
        let i = t.label_bound();
        for u in horizontal_raw(t, i)? {
            out.extend(on_diagonal(horizontal_raw(&u, i + 1)?));
        }
    }
    Ok(out.into_iter().collect())
}
