//! Infix expression reader used for transcribed reference formulas.
//!
//! Grammar: sums and differences of products and quotients of powers.
//! Atoms are integers, parenthesised expressions, the ring variables
//! `u m s4 t4`, the shorthands `s = s4^4` and `t = t4^4`, and `i`.
//! Exponents are integers, optionally negative, or parenthesised
//! fractions such as `s^(3/2)`; fractional powers are only accepted when
//! the base is a unit monomial with divisible exponents.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::coeff::Coeff;
use super::poly::{Monomial, Polynomial, Var};
use super::ratfn::RationalFunction;
use super::ExactError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, ExactError> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut k = 0;
    while k < cs.len() {
        let c = cs[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let st = k;
            while k < cs.len() && cs[k].is_ascii_digit() {
                k += 1;
            }
            let digits: String = cs[st..k].iter().collect();
            out.push(Tok::Int(digits.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() {
            let st = k;
            while k < cs.len() && (cs[k].is_ascii_alphanumeric() || cs[k] == '_') {
                k += 1;
            }
            out.push(Tok::Ident(cs[st..k].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            k += 1;
        } else {
            return Err(ExactError::Parse(format!("unexpected `{c}` in `{s}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

type R<C> = Result<RationalFunction<C>, ExactError>;

impl<'a> Parser<'a> {
    fn err(&self, what: &str) -> ExactError {
        ExactError::Parse(format!("{what} at token {} in `{}`", self.pos, self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExactError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn expr<C: Coeff>(&mut self) -> R<C> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<C: Coeff>(&mut self) -> R<C> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                acc = acc.checked_div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary<C: Coeff>(&mut self) -> R<C> {
        if self.eat('-') {
            Ok(-self.unary::<C>()?)
        } else {
            self.power()
        }
    }

    fn power<C: Coeff>(&mut self) -> R<C> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.exponent()?;
        if e.is_integer() {
            let n: i32 = e
                .to_integer()
                .try_into()
                .map_err(|_| self.err("exponent too large"))?;
            return base.powi(n);
        }
        fractional_power(&base, &e).ok_or_else(|| self.err("fractional power of non-monomial"))
    }

    fn exponent(&mut self) -> Result<BigRational, ExactError> {
        if self.eat('(') {
            let neg = self.eat('-');
            let n = self.int()?;
            let d = if self.eat('/') { self.int()? } else { BigInt::one() };
            self.expect(')')?;
            let q = BigRational::new(n, d);
            return Ok(if neg { -q } else { q });
        }
        let neg = self.eat('-');
        let n = BigRational::from_integer(self.int()?);
        Ok(if neg { -n } else { n })
    }

    fn int(&mut self) -> Result<BigInt, ExactError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.err("expected integer")),
        }
    }

    fn atom<C: Coeff>(&mut self) -> R<C> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(RationalFunction::constant(C::from_rational(BigRational::from_integer(n))))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "s" => Ok(RationalFunction::monomial(Monomial::var(Var::S4, 4), C::one())),
                    "t" => Ok(RationalFunction::monomial(Monomial::var(Var::T4, 4), C::one())),
                    "i" => "(0)+(1)i"
                        .parse::<C>()
                        .map(RationalFunction::constant)
                        .map_err(|_| self.err("coefficient ring has no imaginary unit")),
                    other => Var::from_name(other)
                        .map(RationalFunction::var)
                        .ok_or_else(|| self.err(&format!("unknown identifier `{other}`"))),
                }
            }
            _ => Err(self.err("expected atom")),
        }
    }
}

fn fractional_power<C: Coeff>(base: &RationalFunction<C>, e: &BigRational) -> Option<RationalFunction<C>> {
    let (num, den) = (base.num(), base.den());
    let (inv, p) = match (num.len(), den.as_constant()) {
        (1, Some(d)) if d.is_one() => (false, num),
        _ if num.as_constant().map_or(false, |c| c.is_one()) && den.len() == 1 => (true, den),
        _ => return None,
    };
    let (m, c) = p.leading()?;
    if !c.is_one() {
        return None;
    }
    let mut ex = [0u32; 4];
    let neg = (e < &BigRational::zero()) != inv;
    let ea = if e < &BigRational::zero() { -e.clone() } else { e.clone() };
    for v in Var::ALL {
        let q = BigRational::from_integer(m.exponent(v).into()) * &ea;
        if !q.is_integer() {
            return None;
        }
        ex[v.index()] = q.to_integer().try_into().ok()?;
    }
    let mono = RationalFunction::from_poly(Polynomial::monomial(Monomial::from_exponents(ex), C::one()));
    if neg {
        mono.recip().ok()
    } else {
        Some(mono)
    }
}

/// Parses an infix expression into a canonical rational function.
pub fn parse_expr<C: Coeff>(src: &str) -> Result<RationalFunction<C>, ExactError> {
    let mut p = Parser { toks: lex(src)?, pos: 0, src };
    let r = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(r)
}
