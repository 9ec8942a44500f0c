use std::fmt::{self, Display};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::coeff::{Coeff, GaussRational};
use super::poly::{Monomial, Polynomial, Var};
use super::{ExactError, POLE_THRESHOLD};
use crate::scalar::Real;

/// Quotient of two polynomials in canonical form: common monomial factors
/// cancelled, exact polynomial quotients collapsed, and the leading
/// denominator coefficient equal to one.
#[derive(Clone, Debug)]
pub struct RationalFunction<C: Coeff = GaussRational> {
    num: Polynomial<C>,
    den: Polynomial<C>,
}

/// Numeric values for the ring variables.
#[derive(Clone, Copy, Debug)]
pub struct Assignment<T> {
    vals: [Option<Complex<T>>; 4],
}

impl<T: Real> Default for Assignment<T> {
    fn default() -> Self {
        Assignment { vals: [None; 4] }
    }
}

impl<T: Real> Assignment<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, v: Var, value: Complex<T>) -> Self {
        self.vals[v.index()] = Some(value);
        self
    }

    pub fn with_real(self, v: Var, value: T) -> Self {
        self.with(v, Complex::new(value, T::zero()))
    }

    /// Assigns `s4 = s^(1/4)` for a positive modular variable `s`.
    pub fn with_s(self, s: T) -> Self {
        self.with_real(Var::S4, s.powf(T::lit(0.25)))
    }

    /// Assigns `t4 = t^(1/4)` for a positive modular variable `t`.
    pub fn with_t(self, t: T) -> Self {
        self.with_real(Var::T4, t.powf(T::lit(0.25)))
    }

    pub fn get(&self, v: Var) -> Option<Complex<T>> {
        self.vals[v.index()]
    }

    fn resolve<C: Coeff>(&self, p: &Polynomial<C>) -> Result<[Complex<T>; 4], ExactError> {
        let mut out = [Complex::new(T::zero(), T::zero()); 4];
        for v in Var::ALL {
            match self.vals[v.index()] {
                Some(x) => out[v.index()] = x,
                None if p.degree(v) > 0 => return Err(ExactError::UnassignedVariable(v)),
                None => {}
            }
        }
        Ok(out)
    }
}

impl<C: Coeff> RationalFunction<C> {
    pub fn new(num: Polynomial<C>, den: Polynomial<C>) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: Polynomial<C>) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn constant(c: C) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn integer(n: i64) -> Self {
        Self::from_poly(Polynomial::integer(n))
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Self::constant(C::from_rational(super::ratio(n, d)))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(Polynomial::var(v))
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        Self::from_poly(Polynomial::monomial(m, c))
    }

    pub fn num(&self) -> &Polynomial<C> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<C> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.num.is_real() && self.den.is_real()
    }

    pub fn as_constant(&self) -> Option<C> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        n.checked_div(&d)
    }

    fn normalized(mut num: Polynomial<C>, mut den: Polynomial<C>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        if !g.is_one() {
            num = num.div_monomial(&g).expect("content divides");
            den = den.div_monomial(&g).expect("content divides");
        }
        if den.len() > 1 {
            if let Some(q) = num.div_exact(&den) {
                num = q;
                den = Polynomial::one();
            }
        }
        let lc = den.leading().expect("nonzero denominator").1.clone();
        if !lc.is_one() {
            let inv = C::one().checked_div(&lc).expect("nonzero leading coefficient");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunction { num, den }
    }

    /// Decides equality by expanding `a.num * b.den - b.num * a.den`.
    pub fn equals(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        (&self.num * &other.den) == (&other.num * &self.den)
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, ExactError> {
        if o.num.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::normalized(&self.num * &o.den, &self.den * &o.num))
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        Self::one().checked_div(self)
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, n: i32) -> Result<Self, ExactError> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let k = n.unsigned_abs();
        Ok(RationalFunction { num: base.num.pow(k), den: base.den.pow(k) })
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    /// `k`-th partial derivative in `v`.
    ///
    /// With `f = N/D` the iterates satisfy `f^(j) = N_j / D^(j+1)` where
    /// `N_{j+1} = N_j' D - (j+1) N_j D'`, so the denominator grows by one
    /// factor of `D` per step instead of squaring.
    pub fn differentiate(&self, v: Var, k: u32) -> Self {
        if k == 0 {
            return self.clone();
        }
        if self.den.degree(v) == 0 {
            let mut n = self.num.clone();
            for _ in 0..k {
                n = n.derivative(v);
            }
            return Self::normalized(n, self.den.clone());
        }
        let d = &self.den;
        let dd = d.derivative(v);
        let mut n = self.num.clone();
        for j in 0..k {
            let scale = C::from_integer(j as i64 + 1);
            n = &(&n.derivative(v) * d) - &(&n * &dd).scale(&scale);
        }
        Self::normalized(n, d.pow(k + 1))
    }

    /// Substitutes a rational function for `v`.
    pub fn substitute(&self, v: Var, value: &Self) -> Result<Self, ExactError> {
        let deg = self.num.degree(v).max(self.den.degree(v));
        if deg == 0 {
            return Ok(self.clone());
        }
        let (p, q) = (&value.num, &value.den);
        let mut p_pow = vec![Polynomial::one()];
        let mut q_pow = vec![Polynomial::one()];
        for k in 1..=deg as usize {
            p_pow.push(&p_pow[k - 1] * p);
            q_pow.push(&q_pow[k - 1] * q);
        }
        let compose = |f: &Polynomial<C>| {
            let mut acc = Polynomial::zero();
            for (e, c) in f.coefficients_in(v).iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                acc = &acc + &(&(c * &p_pow[e]) * &q_pow[deg as usize - e]);
            }
            acc
        };
        let den = compose(&self.den);
        if den.is_zero() {
            return Err(ExactError::DenominatorVanishes);
        }
        Ok(Self::normalized(compose(&self.num), den))
    }

    /// Floating evaluation. Accuracy is limited by the conditioning of the
    /// expanded form; no error bound is guaranteed.
    pub fn eval_numeric<T: Real>(&self, at: &Assignment<T>) -> Result<Complex<T>, ExactError> {
        let den = self.den.eval(&at.resolve(&self.den)?);
        let mag = den.norm().to_f64().unwrap_or(0.0);
        if !(mag > POLE_THRESHOLD) {
            return Err(ExactError::NearPole(mag));
        }
        Ok(self.num.eval(&at.resolve(&self.num)?) / den)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> RationalFunction<D> {
        RationalFunction::normalized(self.num.map_coeffs(&f), self.den.map_coeffs(&f))
    }

    /// Integer-coefficient rendering such as `-1/(2*s4^4)`.
    pub fn pretty(&self) -> String {
        let mut l = BigInt::one();
        for (_, c) in self.num.terms().chain(self.den.terms()) {
            l = l.lcm(&c.denominator_lcm());
        }
        let lc = C::from_rational(BigRational::from_integer(l));
        let (mut n, mut d) = (self.num.scale(&lc), self.den.scale(&lc));
        let mut g = BigInt::zero();
        for (_, c) in n.terms().chain(d.terms()) {
            g = g.gcd(&c.integer_content());
        }
        if !g.is_zero() && !g.is_one() {
            let inv = C::from_rational(BigRational::new(BigInt::one(), g.abs()));
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        let tidy = |p: &Polynomial<C>| p.to_string().replace(" + -", " - ");
        if let Some(c) = d.as_constant() {
            if c.is_one() {
                return tidy(&n);
            }
        }
        let ns = if n.len() > 1 { format!("({})", tidy(&n)) } else { tidy(&n) };
        format!("{ns}/({})", tidy(&d))
    }
}

impl<C: Coeff> PartialEq for RationalFunction<C> {
    fn eq(&self, o: &Self) -> bool {
        self.equals(o)
    }
}

impl<C: Coeff> From<Polynomial<C>> for RationalFunction<C> {
    fn from(p: Polynomial<C>) -> Self {
        Self::from_poly(p)
    }
}

impl<C: Coeff> Add<&RationalFunction<C>> for &RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn add(self, o: &RationalFunction<C>) -> RationalFunction<C> {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RationalFunction::normalized(&self.num + &o.num, self.den.clone());
        }
        if let Some(q) = o.den.div_exact(&self.den) {
            return RationalFunction::normalized(&(&self.num * &q) + &o.num, o.den.clone());
        }
        if let Some(q) = self.den.div_exact(&o.den) {
            return RationalFunction::normalized(&self.num + &(&o.num * &q), self.den.clone());
        }
        RationalFunction::normalized(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl<C: Coeff> Neg for &RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn neg(self) -> RationalFunction<C> {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl<C: Coeff> Sub<&RationalFunction<C>> for &RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn sub(self, o: &RationalFunction<C>) -> RationalFunction<C> {
        self + &(-o)
    }
}

impl<C: Coeff> Mul<&RationalFunction<C>> for &RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn mul(self, o: &RationalFunction<C>) -> RationalFunction<C> {
        if self.is_zero() || o.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::normalized(&self.num * &o.num, &self.den * &o.den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl<C: Coeff> $tr for RationalFunction<C> {
            type Output = RationalFunction<C>;
            fn $f(self, o: RationalFunction<C>) -> RationalFunction<C> {
                (&self).$f(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coeff> Neg for RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn neg(self) -> RationalFunction<C> {
        -&self
    }
}

impl<C: Coeff> Display for RationalFunction<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.num, self.den)
    }
}

impl<C: Coeff> FromStr for RationalFunction<C> {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, ExactError> {
        let (n, d) = s
            .split_once(" | ")
            .ok_or_else(|| ExactError::Parse(format!("missing ` | ` in `{s}`")))?;
        RationalFunction::new(n.parse()?, d.parse()?)
    }
}
