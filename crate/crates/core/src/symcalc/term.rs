use std::collections::BTreeMap;
use std::fmt::{self, Display};
use std::str::FromStr;

use num_traits::{One, Zero};

use super::atom::{Atom, AtomClass, AtomKind, Label};
use super::SymbolError;
use crate::exact::GaussRational;

/// Coefficient times an ordered word, split by commutation class.
///
/// The product represented is `alg · clif · central`; the three classes
/// commute with each other, so only the order inside `alg` and `clif` is
/// significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolTerm {
    pub coeff: GaussRational,
    pub alg: Vec<Atom>,
    pub clif: Vec<Atom>,
    pub central: Vec<Atom>,
}

type TermKey = (Vec<Atom>, Vec<Atom>, Vec<Atom>);

impl SymbolTerm {
    pub fn new(coeff: GaussRational, atoms: impl IntoIterator<Item = Atom>) -> SymbolTerm {
        let mut t = SymbolTerm { coeff, alg: vec![], clif: vec![], central: vec![] };
        for a in atoms {
            t.push(a);
        }
        t
    }

    pub fn one() -> SymbolTerm {
        SymbolTerm::new(GaussRational::one(), [])
    }

    pub(crate) fn push(&mut self, a: Atom) {
        match a.class() {
            AtomClass::Algebra => self.alg.push(a),
            AtomClass::Clifford => self.clif.push(a),
            AtomClass::Central => self.central.push(a),
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.alg.iter().chain(&self.clif).chain(&self.central)
    }

    pub fn count(&self, kind: AtomKind) -> usize {
        self.atoms().filter(|a| a.kind == kind).count()
    }

    pub fn contains(&self, kind: AtomKind) -> bool {
        self.atoms().any(|a| a.kind == kind)
    }

    pub fn xi_degree(&self) -> i32 {
        self.atoms().map(|a| a.kind.xi_degree()).sum()
    }

    /// One past the largest label in use.
    pub fn label_bound(&self) -> Label {
        self.atoms().flat_map(|a| a.labels().iter().map(|&l| l + 1)).max().unwrap_or(0)
    }

    pub(crate) fn shift_labels(&self, by: Label) -> SymbolTerm {
        let mut t = self.clone();
        for a in t.alg.iter_mut().chain(&mut t.clif).chain(&mut t.central) {
            for l in a.labels_mut() {
                *l += by;
            }
        }
        t
    }

    /// Word concatenation `self · o` without relabelling.
    pub(crate) fn concat(&self, o: &SymbolTerm) -> SymbolTerm {
        let mut t = self.clone();
        t.coeff = self.coeff.clone() * o.coeff.clone();
        t.alg.extend_from_slice(&o.alg);
        t.clif.extend_from_slice(&o.clif);
        t.central.extend_from_slice(&o.central);
        t
    }

    /// Product with the labels of `o` shifted clear of those of `self`.
    pub fn mul(&self, o: &SymbolTerm) -> SymbolTerm {
        self.concat(&o.shift_labels(self.label_bound()))
    }

    /// Word as a run-length list of `(atom, power)`.
    pub fn word(&self) -> Vec<(Atom, u32)> {
        let mut out: Vec<(Atom, u32)> = Vec::new();
        for a in self.atoms() {
            match out.last_mut() {
                Some((b, n)) if *b == *a && a.labels().is_empty() => *n += 1,
                _ => out.push((*a, 1)),
            }
        }
        out
    }

    /// Canonical representative, or `None` if the term vanishes.
    ///
    /// Runs of the mutually commuting atoms `K`, `B0`, `P2` are sorted with
    /// `B0 · P2 = 1` cancelled, adjacent `SigmaD SigmaD` becomes `Xi2`, and
    /// labels are renamed in order of first appearance.
    pub fn canonical(mut self) -> Option<SymbolTerm> {
        if self.coeff.is_zero() {
            return None;
        }
        self.alg = normalize_runs(&self.alg);
        let mut k = 0;
        while k + 1 < self.clif.len() {
            if self.clif[k].kind == AtomKind::SigmaD && self.clif[k + 1].kind == AtomKind::SigmaD {
                self.clif.drain(k..k + 2);
                self.central.push(Atom::scalar(AtomKind::Xi2));
                k = k.saturating_sub(1);
            } else {
                k += 1;
            }
        }
        self.relabel();
        Some(self)
    }

    fn relabel(&mut self) {
        const UNSEEN: u16 = 1000;
        let mut rank: BTreeMap<Label, u16> = BTreeMap::new();
        for a in self.alg.iter().chain(&self.clif) {
            for &l in a.labels() {
                let n = rank.len() as u16;
                rank.entry(l).or_insert(n);
            }
        }
        let key = |a: &Atom, rank: &BTreeMap<Label, u16>| {
            let ls: Vec<u16> = a.labels().iter().map(|l| *rank.get(l).unwrap_or(&UNSEEN)).collect();
            (a.kind, ls)
        };
        self.central.sort_by_key(|a| key(a, &rank));
        let mut map: BTreeMap<Label, Label> = BTreeMap::new();
        for a in self.alg.iter().chain(&self.clif).chain(&self.central) {
            for &l in a.labels() {
                let n = map.len() as Label;
                map.entry(l).or_insert(n);
            }
        }
        let mut sign_flip = false;
        for a in self.alg.iter_mut().chain(&mut self.clif).chain(&mut self.central) {
            for l in a.labels_mut() {
                *l = map[l];
            }
            let kind = a.kind;
            let ls = a.labels_mut();
            if kind.is_symmetric() {
                ls.sort_unstable();
            } else if kind == AtomKind::Grad2Tau && ls[0] > ls[1] {
                ls.swap(0, 1);
                sign_flip = !sign_flip;
            }
        }
        self.central.sort();
        if sign_flip {
            self.coeff = -std::mem::replace(&mut self.coeff, GaussRational::zero());
        }
    }

    fn key(&self) -> TermKey {
        (self.alg.clone(), self.clif.clone(), self.central.clone())
    }
}

fn normalize_runs(alg: &[Atom]) -> Vec<Atom> {
    let mut out = Vec::with_capacity(alg.len());
    let (mut k, mut b) = (0usize, 0i64);
    let flush = |out: &mut Vec<Atom>, k: &mut usize, b: &mut i64| {
        out.extend(std::iter::repeat(Atom::scalar(AtomKind::K)).take(*k));
        let kind = if *b >= 0 { AtomKind::B0 } else { AtomKind::P2 };
        out.extend(std::iter::repeat(Atom::scalar(kind)).take(b.unsigned_abs() as usize));
        *k = 0;
        *b = 0;
    };
    for a in alg {
        match a.kind {
            AtomKind::K => k += 1,
            AtomKind::B0 => b += 1,
            AtomKind::P2 => b -= 1,
            _ => {
                flush(&mut out, &mut k, &mut b);
                out.push(*a);
            }
        }
    }
    flush(&mut out, &mut k, &mut b);
    out
}

impl Display for SymbolTerm {
    /// `coeff * word`, e.g. `(0)+(1)i * K B0 GradK_a B0 DSigmaD_a SigmaD`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} *", self.coeff)?;
        let word = self.word();
        if word.is_empty() {
            return f.write_str(" 1");
        }
        for (a, n) in word {
            if n == 1 {
                write!(f, " {a}")?;
            } else {
                write!(f, " {a}^{n}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for SymbolTerm {
    type Err = SymbolError;

    fn from_str(s: &str) -> Result<Self, SymbolError> {
        let err = |w: &str| SymbolError::Parse(format!("{w} in `{s}`"));
        let (c, w) = s.split_once(" * ").ok_or_else(|| err("missing ` * `"))?;
        let coeff: GaussRational = c.trim().parse().map_err(|_| err("bad coefficient"))?;
        let mut t = SymbolTerm::new(coeff, []);
        for tok in w.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (body, pow) = match tok.split_once('^') {
                Some((b, p)) => (b, p.parse::<usize>().map_err(|_| err("bad power"))?),
                None => (tok, 1),
            };
            let (name, labels) = match body.split_once('_') {
                Some((n, l)) => (n, l.bytes().map(|b| b.wrapping_sub(b'a')).collect::<Vec<_>>()),
                None => (body, vec![]),
            };
            let kind = AtomKind::from_name(name).ok_or_else(|| err("unknown atom"))?;
            if labels.len() != kind.arity() || labels.iter().any(|&l| l >= 26) {
                return Err(err("bad labels"));
            }
            for _ in 0..pow {
                t.push(Atom::new(kind, &labels));
            }
        }
        Ok(t)
    }
}

/// Sum of canonical terms with like terms merged, sorted by word.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolSum {
    terms: Vec<SymbolTerm>,
}

impl SymbolSum {
    pub fn zero() -> SymbolSum {
        SymbolSum::default()
    }

    pub fn from_terms(it: impl IntoIterator<Item = SymbolTerm>) -> SymbolSum {
        let mut acc: BTreeMap<TermKey, GaussRational> = BTreeMap::new();
        for t in it.into_iter().filter_map(SymbolTerm::canonical) {
            let e = acc.entry(t.key()).or_insert_with(GaussRational::zero);
            *e = std::mem::replace(e, GaussRational::zero()) + t.coeff;
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((alg, clif, central), coeff)| SymbolTerm { coeff, alg, clif, central })
            .collect();
        SymbolSum { terms }
    }

    pub fn single(t: SymbolTerm) -> SymbolSum {
        SymbolSum::from_terms([t])
    }

    pub fn constant(c: GaussRational) -> SymbolSum {
        SymbolSum::single(SymbolTerm::new(c, []))
    }

    pub fn terms(&self) -> &[SymbolTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &SymbolSum) -> SymbolSum {
        SymbolSum::from_terms(self.terms.iter().chain(&o.terms).cloned())
    }

    pub fn sub(&self, o: &SymbolSum) -> SymbolSum {
        self.add(&o.scale(&-GaussRational::one()))
    }

    pub fn scale(&self, c: &GaussRational) -> SymbolSum {
        SymbolSum::from_terms(self.terms.iter().map(|t| {
            let mut t = t.clone();
            t.coeff = t.coeff * c.clone();
            t
        }))
    }

    /// Noncommutative product `self · o`.
    pub fn mul(&self, o: &SymbolSum) -> SymbolSum {
        SymbolSum::from_terms(
            self.terms.iter().flat_map(|a| o.terms.iter().map(move |b| a.mul(b))),
        )
    }

    /// Terms of the given homogeneity degree.
    pub fn of_degree(&self, d: i32) -> SymbolSum {
        SymbolSum { terms: self.terms.iter().filter(|t| t.xi_degree() == d).cloned().collect() }
    }
}

impl Display for SymbolSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromIterator<SymbolTerm> for SymbolSum {
    fn from_iter<I: IntoIterator<Item = SymbolTerm>>(it: I) -> Self {
        SymbolSum::from_terms(it)
    }
}
