//! Leading bi-differential terms `a0`, `a1`, `a2` of the symbol product.

use num_traits::{One, Zero};

use super::atom::{Atom, AtomKind, Label};
use super::rules::{horizontal_raw, on_diagonal, vertical_term};
use super::term::{SymbolSum, SymbolTerm};
use super::SymbolError;
use crate::exact::{ratio, GaussRational};

fn half() -> GaussRational {
    ratio(1, 2).into()
}

fn times(ts: Vec<SymbolTerm>, c: &GaussRational) -> Vec<SymbolTerm> {
    ts.into_iter()
        .map(|mut t| {
            t.coeff = t.coeff * c.clone();
            t
        })
        .collect()
}

fn products(ps: &[SymbolTerm], qs: &[SymbolTerm], extra: &[Atom]) -> Vec<SymbolTerm> {
    let mut out = Vec::with_capacity(ps.len() * qs.len());
    for p in ps {
        for q in qs {
            let mut t = p.concat(q);
            for a in extra {
                t.push(*a);
            }
            out.push(t);
        }
    }
    out
}

fn vertical_all(ts: &[SymbolTerm], j: Label) -> Vec<SymbolTerm> {
    ts.iter().flat_map(|t| vertical_term(t, j)).collect()
}

fn horizontal_all(ts: &[SymbolTerm], j: Label) -> Result<Vec<SymbolTerm>, SymbolError> {
    let mut out = Vec::new();
    for t in ts {
        out.extend(horizontal_raw(t, j)?);
    }
    Ok(out)
}

/// Replaces `DSigmaD_a DSigmaD_b · Grad2Tau_ab` by `-Scal/4`: the Clifford
/// contraction of the spinor curvature.
fn contract_spin_curvature(mut t: SymbolTerm) -> SymbolTerm {
    'outer: loop {
        for k in 0..t.clif.len().saturating_sub(1) {
            let (x, y) = (t.clif[k], t.clif[k + 1]);
            if x.kind != AtomKind::DSigmaD || y.kind != AtomKind::DSigmaD {
                continue;
            }
            let (la, lb) = (x.labels()[0], y.labels()[0]);
            let hit = t.central.iter().position(|c| {
                c.kind == AtomKind::Grad2Tau
                    && (c.labels() == [la, lb] || c.labels() == [lb, la])
            });
            if let Some(p) = hit {
                let sign = if t.central[p].labels() == [la, lb] { -1 } else { 1 };
                t.central.remove(p);
                t.clif.drain(k..k + 2);
                t.central.push(Atom::scalar(AtomKind::Scal));
                t.coeff = t.coeff * GaussRational::from(ratio(sign, 4));
                continue 'outer;
            }
        }
        return t;
    }
}

/// `a_j(p, q)` for `j ≤ 2`:
///
/// * `a0 = p q`
/// * `a1 = -i (D_l p)(∇_l q)`
/// * `a2 = -[½ (D_i D_j p)(∇_i ∇_j q) + (D_i p)(D_j q) ∇²τ_ij + ½ (D_i p)(D_j D_k q) ∇³ℓ_ijk]`
pub fn widom_product(j: u32, p: &SymbolSum, q: &SymbolSum) -> Result<SymbolSum, SymbolError> {
    if j > 2 {
        return Err(SymbolError::UnsupportedOrder(j));
    }
    let mut out = Vec::new();
    for tp in p.terms() {
        for tq in q.terms() {
            let tq = tq.shift_labels(tp.label_bound());
            let base = tq.label_bound().max(tp.label_bound());
            let (i, jj, k) = (base, base + 1, base + 2);
            let tp = std::slice::from_ref(tp);
            let tq = std::slice::from_ref(&tq);
            match j {
                0 => out.extend(products(tp, tq, &[])),
                1 => {
                    let dp = vertical_all(tp, i);
                    let nq = on_diagonal(horizontal_all(tq, i)?);
                    out.extend(times(products(&dp, &nq, &[]), &-GaussRational::i()));
                }
                _ => {
                    let ddp = vertical_all(&vertical_all(tp, i), jj);
                    let nnq = on_diagonal(horizontal_all(&horizontal_all(tq, i)?, jj)?);
                    let dp = vertical_all(tp, i);
                    let dq = vertical_all(tq, jj);
                    let ddq = vertical_all(&vertical_all(tq, jj), k);
                    let tau = Atom::new(AtomKind::Grad2Tau, &[i, jj]);
                    let ell = Atom::new(AtomKind::Grad3Ell, &[i, jj, k]);
                    let minus_half = -half();
                    out.extend(times(products(&ddp, &nnq, &[]), &minus_half));
                    out.extend(times(products(&dp, &dq, &[tau]), &-GaussRational::one()));
                    out.extend(times(products(&dp, &ddq, &[ell]), &minus_half));
                }
            }
        }
    }
    let out: Vec<SymbolTerm> = out
        .into_iter()
        .filter(|t| !t.coeff.is_zero())
        .map(contract_spin_curvature)
        .collect();
    Ok(out.into_iter().collect())
}
