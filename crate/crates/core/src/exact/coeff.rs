use std::fmt::{self, Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::Real;

/// Coefficient field for [`Polynomial`](super::Polynomial).
pub trait Coeff:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + FromStr
    + Send
    + Sync
{
    fn from_integer(n: i64) -> Self;
    fn from_rational(q: BigRational) -> Self;
    /// `None` when `other` is zero.
    fn checked_div(&self, other: &Self) -> Option<Self>;
    fn to_complex<T: Real>(&self) -> Complex<T>;
    fn is_real(&self) -> bool;
    /// Least common multiple of the denominators of all rational parts.
    fn denominator_lcm(&self) -> BigInt;
    /// Gcd of the integer parts, assuming the coefficient is integral.
    fn integer_content(&self) -> BigInt;
}

fn rational_to_float<T: Real>(q: &BigRational) -> T {
    // Numerators can exceed f64 range transiently; scale by bit length.
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => T::lit(n / d),
        _ => {
            let shift = q.numer().bits().max(q.denom().bits()) as i64 - 60;
            let shift = shift.max(0) as usize;
            let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (q.denom() >> shift).to_f64().unwrap_or(0.0);
            T::lit(n / d)
        }
    }
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    num_integer::Integer::lcm(a, b)
}

impl Coeff for BigRational {
    fn from_integer(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_rational(q: BigRational) -> Self {
        q
    }
    fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            None
        } else {
            Some(self / other)
        }
    }
    fn to_complex<T: Real>(&self) -> Complex<T> {
        Complex::new(rational_to_float(self), T::zero())
    }
    fn is_real(&self) -> bool {
        true
    }
    fn denominator_lcm(&self) -> BigInt {
        self.denom().clone()
    }
    fn integer_content(&self) -> BigInt {
        self.numer().abs()
    }
}

/// Gaussian rational `re + im·i` with arbitrary-precision parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational { re, im }
    }

    pub fn i() -> Self {
        GaussRational::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        GaussRational::new(
            BigRational::new(BigInt::from(n), BigInt::from(d)),
            BigRational::zero(),
        )
    }

    pub fn conj(&self) -> Self {
        GaussRational::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl Zero for GaussRational {
    fn zero() -> Self {
        GaussRational::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRational {
    fn one() -> Self {
        GaussRational::new(BigRational::one(), BigRational::zero())
    }
}

impl Neg for GaussRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussRational::new(-self.re, -self.im)
    }
}

impl Add for GaussRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GaussRational::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GaussRational::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRational::new(self.re * o.re, BigRational::zero());
        }
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        GaussRational::new(re, im)
    }
}

impl From<BigRational> for GaussRational {
    fn from(q: BigRational) -> Self {
        GaussRational::new(q, BigRational::zero())
    }
}

impl From<i64> for GaussRational {
    fn from(n: i64) -> Self {
        GaussRational::from_integer(n)
    }
}

impl Coeff for GaussRational {
    fn from_integer(n: i64) -> Self {
        GaussRational::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }
    fn from_rational(q: BigRational) -> Self {
        q.into()
    }
    fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if other.im.is_zero() {
            return Some(GaussRational::new(&self.re / &other.re, &self.im / &other.re));
        }
        let n = other.norm_sqr();
        let p = self.clone() * other.conj();
        Some(GaussRational::new(p.re / &n, p.im / n))
    }
    fn to_complex<T: Real>(&self) -> Complex<T> {
        Complex::new(rational_to_float(&self.re), rational_to_float(&self.im))
    }
    fn is_real(&self) -> bool {
        self.im.is_zero()
    }
    fn denominator_lcm(&self) -> BigInt {
        lcm(self.re.denom(), self.im.denom())
    }
    fn integer_content(&self) -> BigInt {
        num_integer::Integer::gcd(self.re.numer(), self.im.numer())
    }
}

impl Display for GaussRational {
    /// Real values print as `a` or `a/b`; others as `(a/b)+(c/d)i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "({})+({})i", self.re, self.im)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed Gaussian rational `{0}`")]
pub struct ParseGaussError(pub String);

impl FromStr for GaussRational {
    type Err = ParseGaussError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseGaussError(s.to_string());
        let t = s.trim();
        if let Some(body) = t.strip_prefix('(').and_then(|b| b.strip_suffix(")i")) {
            let (re, im) = body.split_once(")+(").ok_or_else(err)?;
            let re = re.parse::<BigRational>().map_err(|_| err())?;
            let im = im.parse::<BigRational>().map_err(|_| err())?;
            return Ok(GaussRational::new(re, im));
        }
        t.parse::<BigRational>().map(Into::into).map_err(|_| err())
    }
}
