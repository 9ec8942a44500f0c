use std::collections::BTreeMap;
use std::fmt::{self, Display};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex;

use super::coeff::{Coeff, GaussRational};
use super::ExactError;
use crate::scalar::Real;

/// Ring generators. `S4` and `T4` are fourth roots of the modular variables
/// `s` and `t`, so `s = s4^4` and `sqrt(s) = s4^2`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    U,
    M,
    S4,
    T4,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::U, Var::M, Var::S4, Var::T4];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::U => "u",
            Var::M => "m",
            Var::S4 => "s4",
            Var::T4 => "t4",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == name)
    }
}

impl Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Power product over [`Var`]. The derived order is lexicographic in
/// `(u, m, s4, t4)`.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial([u32; 4]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; 4])
    }

    pub fn var(v: Var, e: u32) -> Self {
        let mut m = Monomial::one();
        m.0[v.index()] = e;
        m
    }

    pub fn from_exponents(e: [u32; 4]) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> [u32; 4] {
        self.0
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0; 4]
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(o.0) {
            *a += b;
        }
        Monomial(e)
    }

    /// `self / o` when `o` divides `self`.
    pub fn checked_div(&self, o: &Monomial) -> Option<Monomial> {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(o.0) {
            *a = a.checked_sub(b)?;
        }
        Some(Monomial(e))
    }

    pub fn gcd(&self, o: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(o.0) {
            *a = (*a).min(b);
        }
        Monomial(e)
    }

    fn without(&self, v: Var) -> Monomial {
        let mut e = self.0;
        e[v.index()] = 0;
        Monomial(e)
    }
}

impl Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for v in Var::ALL {
            let e = self.exponent(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

fn parse_power(tok: &str) -> Option<Monomial> {
    let (name, e) = match tok.split_once('^') {
        Some((n, e)) => (n, e.parse::<u32>().ok()?),
        None => (tok, 1),
    };
    Var::from_name(name).map(|v| Monomial::var(v, e))
}

/// Sparse multivariate polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<C: Coeff = GaussRational> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Polynomial<C> {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(C::from_integer(n))
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Monomial::var(v, 1), C::one())
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if the polynomial has no variable part.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Greatest term under the monomial order.
    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (*m, a.clone() * c.clone())).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.mul(mono), a.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn degree(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn derivative(&self, v: Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let mut ex = m.exponents();
            ex[v.index()] -= 1;
            out.add_term(Monomial(ex), c.clone() * C::from_integer(e as i64));
        }
        out
    }

    /// Coefficient polynomials of `v^0, v^1, ...` (each free of `v`).
    pub fn coefficients_in(&self, v: Var) -> Vec<Self> {
        let mut out = vec![Self::zero(); self.degree(v) as usize + 1];
        for (m, c) in &self.terms {
            out[m.exponent(v) as usize].add_term(m.without(v), c.clone());
        }
        out
    }

    /// Replaces `v` by a polynomial value.
    pub fn substitute_poly(&self, v: Var, value: &Self) -> Self {
        let coeffs = self.coefficients_in(v);
        let mut acc = Self::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// Common monomial factor of all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(*first, |g, m| g.gcd(m))
    }

    pub fn div_monomial(&self, d: &Monomial) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.checked_div(d)?, c.clone());
        }
        Some(Polynomial { terms })
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (*dm, dc.clone());
        if d.len() == 1 {
            let inv = C::one().checked_div(&dc)?;
            return self.div_monomial(&dm).map(|q| q.scale(&inv));
        }
        let mut r = self.clone();
        let mut q = Self::zero();
        while let Some((rm, rc)) = r.leading() {
            let tm = rm.checked_div(&dm)?;
            let tc = rc.checked_div(&dc)?;
            r = &r - &d.mul_monomial(&tm, &tc);
            q.add_term(tm, tc);
        }
        Some(q)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(Coeff::is_real)
    }

    /// Evaluates with `vals[v.index()]` substituted for each variable.
    pub fn eval<T: Real>(&self, vals: &[Complex<T>; 4]) -> Complex<T> {
        let mut powers: [Vec<Complex<T>>; 4] = Default::default();
        for v in Var::ALL {
            let d = self.degree(v) as usize;
            let p = &mut powers[v.index()];
            p.push(Complex::new(T::one(), T::zero()));
            for k in 1..=d {
                let next = p[k - 1] * vals[v.index()];
                p.push(next);
            }
        }
        let mut acc = Complex::new(T::zero(), T::zero());
        for (m, c) in &self.terms {
            let mut t = c.to_complex::<T>();
            for v in Var::ALL {
                t = t * powers[v.index()][m.exponent(v) as usize];
            }
            acc = acc + t;
        }
        acc
    }
}

impl<C: Coeff> Default for Polynomial<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> Add<&Polynomial<C>> for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, o: &Polynomial<C>) -> Polynomial<C> {
        let (big, small) = if self.len() >= o.len() { (self, o) } else { (o, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub<&Polynomial<C>> for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, o: &Polynomial<C>) -> Polynomial<C> {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<C: Coeff> Mul<&Polynomial<C>> for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, o: &Polynomial<C>) -> Polynomial<C> {
        let mut acc: std::collections::HashMap<Monomial, C> =
            std::collections::HashMap::with_capacity(self.len() * o.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = ma.mul(mb);
                let p = ca.clone() * cb.clone();
                match acc.get_mut(&m) {
                    Some(e) => *e = std::mem::replace(e, C::zero()) + p,
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        Polynomial {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl<C: Coeff> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl<C: Coeff> $tr for Polynomial<C> {
            type Output = Polynomial<C>;
            fn $f(self, o: Polynomial<C>) -> Polynomial<C> {
                (&self).$f(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coeff> Neg for Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        -&self
    }
}

impl<C: Coeff> Display for Polynomial<C> {
    /// Canonical form: terms in descending monomial order joined by ` + `;
    /// unit coefficients are elided except on the constant term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let one = C::one();
        let minus_one = -C::one();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else if *c == one {
                write!(f, "{m}")?;
            } else if *c == minus_one {
                write!(f, "-{m}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> FromStr for Polynomial<C> {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, ExactError> {
        let err = |what: &str| ExactError::Parse(format!("{what} in `{s}`"));
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut p = Self::zero();
        for term in s.split(" + ") {
            let mut toks = term.split('*');
            let first = toks.next().ok_or_else(|| err("empty term"))?;
            let (coeff, mut mono) = if let Some(m) = parse_power(first) {
                (C::one(), m)
            } else if let Some(m) = first.strip_prefix('-').and_then(parse_power) {
                (-C::one(), m)
            } else {
                let c = first.parse::<C>().map_err(|_| err("bad coefficient"))?;
                (c, Monomial::one())
            };
            for t in toks {
                let m = parse_power(t).ok_or_else(|| err("bad power"))?;
                mono = mono.mul(&m);
            }
            if coeff.is_zero() {
                return Err(err("zero coefficient"));
            }
            if p.terms.contains_key(&mono) {
                return Err(err("repeated monomial"));
            }
            p.terms.insert(mono, coeff);
        }
        Ok(p)
    }
}
