//! Matrix-model evaluation of resolvent words, before and after moving the
//! conformal factors to the left.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{CMatrix, HermitianOperator, ModularData};
use crate::cosphere::IntegratedTerm;
use crate::rearrange::{normal_order, CanonicalTerm};
use crate::report::{Check, VerificationReport};
use crate::symcalc::{Atom, AtomKind, Label};

type M = CMatrix<f64>;

/// Concrete matrices for the algebra atoms: `K = k`,
/// `B0 = (k²|ξ|² − λ)^{−1}`, and one random matrix per labelled insertion.
pub struct WordModel {
    pub modular: ModularData<f64>,
    pub resolvent: M,
    insertions: BTreeMap<(AtomKind, Vec<Label>), M>,
    rng: ChaCha8Rng,
}

impl WordModel {
    /// Random `h = 0.4·H₀` with `H₀` from [`CMatrix::random_hermitian`],
    /// `|ξ|² ∈ [0.5, 1.5]`, `λ ∈ [−1.5, −0.5]`. The scale keeps the
    /// modular weights `e^{wμ/2}` of the longest words below about `10³`.
    pub fn random(n: usize, seed: u64) -> WordModel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = HermitianOperator::new(&M::random_hermitian(n, &mut rng).scale(0.4));
        let xi2: f64 = rng.gen_range(0.5..1.5);
        let lambda: f64 = rng.gen_range(-1.5..-0.5);
        let resolvent = h.function(|l| 1.0 / ((2.0 * l).exp() * xi2 - lambda));
        WordModel { modular: ModularData::new(&h), resolvent, insertions: BTreeMap::new(), rng }
    }

    fn size(&self) -> usize {
        self.modular.size()
    }

    /// The matrix standing for an insertion atom, drawn on first use.
    pub fn insertion(&mut self, a: &Atom) -> M {
        let mut labels = a.labels().to_vec();
        labels.sort_unstable();
        let n = self.size();
        let rng = &mut self.rng;
        self.insertions.entry((a.kind, labels)).or_insert_with(|| M::random(n, rng)).clone()
    }
}

/// The product of the word's matrices in order.
pub fn evaluate_word(model: &mut WordModel, word: &[Atom]) -> M {
    let mut out = M::identity(model.size());
    for a in word {
        let f = match a.kind {
            AtomKind::K => model.modular.weyl.clone(),
            AtomKind::B0 => model.resolvent.clone(),
            AtomKind::GradK | AtomKind::Grad2K => model.insertion(a),
            other => panic!("atom {other:?} has no matrix model"),
        };
        out = &out * &f;
    }
    out
}

/// `k^μ B0^{p₀} Δ^{w₁/2}(X₁) B0^{p₁} ⋯` for a normal-ordered term with the
/// given insertion matrices.
pub fn evaluate_canonical(model: &WordModel, t: &CanonicalTerm, insertions: &[M]) -> M {
    let n = model.size();
    let pow = |a: &M, e: u32| (0..e).fold(M::identity(n), |acc, _| &acc * a);
    let mut out = pow(&model.modular.weyl, t.k_power);
    out = &out * &pow(&model.resolvent, t.b0_exponents[0]);
    for (k, x) in insertions.iter().enumerate() {
        let moved = model.modular.modular_power(t.halfweights[k] as f64, x);
        out = &(&out * &moved) * &pow(&model.resolvent, t.b0_exponents[k + 1]);
    }
    out
}

fn insertion_matrices(model: &mut WordModel, t: &IntegratedTerm) -> Vec<M> {
    t.insertions().copied().collect::<Vec<_>>().iter().map(|a| model.insertion(a)).collect()
}

/// For each random instance, every fibre-integrated word is evaluated as a
/// plain matrix product and again from its normal-ordered form; the worst
/// relative deviation over all instances is reported.
pub fn verify_normal_order(terms: &[IntegratedTerm], instances: usize, n: usize, seed: u64, tol: f64) -> VerificationReport {
    let worst: Vec<(f64, usize)> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut model = WordModel::random(n, seed.wrapping_add(i as u64));
            let mut worst = (0.0f64, 0usize);
            for (j, t) in terms.iter().enumerate() {
                let before = evaluate_word(&mut model, &t.word);
                let xs = insertion_matrices(&mut model, t);
                let after = evaluate_canonical(&model, &normal_order(t), &xs);
                let e = (&before - &after).max_abs() / before.max_abs().max(f64::MIN_POSITIVE);
                if !(e <= worst.0) {
                    worst = (e, j);
                }
            }
            worst
        })
        .collect();
    let (e, idx) = worst.iter().copied().fold((0.0f64, 0usize), |a, b| if !(b.0 <= a.0) { b } else { a });
    let mut rep = VerificationReport::new("normal order");
    let word = terms.get(idx).map(|t| t.word.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" "));
    rep.push(Check::numeric(
        "word product = normal-ordered evaluation",
        e,
        tol,
        format!("{instances} instances x {} words, n={n}, worst word {}", terms.len(), word.unwrap_or_default()),
    ));
    rep
}
