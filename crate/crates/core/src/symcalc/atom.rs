use std::fmt::{self, Display};

/// Abstract index label; contracted labels occur exactly twice in a term.
pub type Label = u8;

/// Alphabet of symbol atoms.
///
/// `P2` is the principal symbol `k^2 |xi|^2 - lambda` and cancels against
/// `B0 = P2^{-1}`. `GradXi2` (the first horizontal derivative of `|xi|^2`)
/// vanishes on the diagonal and only lives inside a second-order horizontal
/// derivative.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomKind {
    K,
    B0,
    P2,
    GradK,
    Grad2K,
    SigmaD,
    DSigmaD,
    Xi2,
    DXi2,
    D2Xi2,
    GradXi2,
    Grad2Xi2,
    Grad2Tau,
    Grad3Ell,
    Scal,
}

/// Commutation class. Atoms in different classes commute; atoms inside the
/// algebra or Clifford class keep their order.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum AtomClass {
    Algebra,
    Clifford,
    Central,
}

impl AtomKind {
    pub const ALL: [AtomKind; 15] = [
        AtomKind::K,
        AtomKind::B0,
        AtomKind::P2,
        AtomKind::GradK,
        AtomKind::Grad2K,
        AtomKind::SigmaD,
        AtomKind::DSigmaD,
        AtomKind::Xi2,
        AtomKind::DXi2,
        AtomKind::D2Xi2,
        AtomKind::GradXi2,
        AtomKind::Grad2Xi2,
        AtomKind::Grad2Tau,
        AtomKind::Grad3Ell,
        AtomKind::Scal,
    ];

    pub fn class(self) -> AtomClass {
        use AtomKind::*;
        match self {
            K | B0 | P2 | GradK | Grad2K => AtomClass::Algebra,
            SigmaD | DSigmaD => AtomClass::Clifford,
            _ => AtomClass::Central,
        }
    }

    pub fn arity(self) -> usize {
        use AtomKind::*;
        match self {
            GradK | DSigmaD | DXi2 | GradXi2 => 1,
            Grad2K | D2Xi2 | Grad2Xi2 | Grad2Tau => 2,
            Grad3Ell => 3,
            _ => 0,
        }
    }

    /// Homogeneity degree in the cotangent variable.
    pub fn xi_degree(self) -> i32 {
        use AtomKind::*;
        match self {
            // ∇²|ξ|² and ∇³ℓ are quadratic and linear in ξ respectively.
            Xi2 | P2 | Grad2Xi2 => 2,
            DXi2 | SigmaD | Grad3Ell => 1,
            B0 => -2,
            _ => 0,
        }
    }

    /// Two-index atoms whose slots may be swapped freely.
    pub fn is_symmetric(self) -> bool {
        matches!(self, AtomKind::Grad2K | AtomKind::D2Xi2 | AtomKind::Grad2Xi2)
    }

    pub fn name(self) -> &'static str {
        use AtomKind::*;
        match self {
            K => "K",
            B0 => "B0",
            P2 => "P2",
            GradK => "GradK",
            Grad2K => "Grad2K",
            SigmaD => "SigmaD",
            DSigmaD => "DSigmaD",
            Xi2 => "Xi2",
            DXi2 => "DXi2",
            D2Xi2 => "D2Xi2",
            GradXi2 => "GradXi2",
            Grad2Xi2 => "Grad2Xi2",
            Grad2Tau => "Grad2Tau",
            Grad3Ell => "Grad3Ell",
            Scal => "Scal",
        }
    }

    pub fn from_name(s: &str) -> Option<AtomKind> {
        AtomKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// An atom together with its index labels.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub kind: AtomKind,
    idx: [Label; 3],
}

impl Atom {
    pub fn new(kind: AtomKind, labels: &[Label]) -> Atom {
        assert_eq!(labels.len(), kind.arity(), "wrong number of labels for {kind:?}");
        let mut idx = [0; 3];
        idx[..labels.len()].copy_from_slice(labels);
        Atom { kind, idx }
    }

    pub fn scalar(kind: AtomKind) -> Atom {
        Atom::new(kind, &[])
    }

    pub fn labels(&self) -> &[Label] {
        &self.idx[..self.kind.arity()]
    }

    pub(crate) fn labels_mut(&mut self) -> &mut [Label] {
        let n = self.kind.arity();
        &mut self.idx[..n]
    }

    pub fn class(&self) -> AtomClass {
        self.kind.class()
    }
}

pub(crate) fn label_char(l: Label) -> char {
    (b'a' + l) as char
}

impl Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        if !self.labels().is_empty() {
            f.write_str("_")?;
            for &l in self.labels() {
                write!(f, "{}", label_char(l))?;
            }
        }
        Ok(())
    }
}
