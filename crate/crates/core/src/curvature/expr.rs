//! Numeric expression trees for the transcendental curvature functions.

use std::fmt::{self, Display};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::CurvatureError;
use crate::exact::{Coeff, Var};
use crate::scalar::Real;
use crate::RationalFunction;

/// `(eˣ − 1)/x`, continued by its Taylor series near 0.
pub fn f1<T: Real>(x: T) -> T {
    if x.abs() < T::lit(1e-3) {
        // Σ_{k<8} x^k/(k+1)!
        let mut term = T::one();
        let mut sum = T::one();
        for k in 1..8 {
            term = term * x / T::lit((k + 1) as f64);
            sum = sum + term;
        }
        sum
    } else {
        x.exp_m1() / x
    }
}

/// `I_n(s) = ∫₀¹ xⁿ e^{sx} dx`.
fn moment_exp<T: Real>(n: u32, s: T) -> T {
    if s.abs() <= T::lit(n as f64 + 1.0).max(T::lit(2.0)) {
        // Σ_k s^k / (k! (n + k + 1)); terms shrink geometrically here.
        let mut term = T::one();
        let mut sum = T::one() / T::lit(n as f64 + 1.0);
        for k in 1..80 {
            term = term * s / T::lit(k as f64);
            let t = term / T::lit((n + k + 1) as f64);
            sum = sum + t;
            if t.abs() <= sum.abs() * T::epsilon() {
                break;
            }
        }
        sum
    } else {
        // Upward recursion I_n = (eˢ − n I_{n−1})/s is stable for |s| > n.
        let mut i = s.exp_m1() / s;
        for k in 1..=n {
            i = (s.exp() - T::lit(k as f64) * i) / s;
        }
        i
    }
}

/// `g₂(s, t) = (f₁(s + t) − f₁(s))/t`, by its Taylor series in `t` near 0.
pub fn g2<T: Real>(s: T, t: T) -> T {
    if t.abs() < T::lit(1e-3) {
        // Σ_{n=1}^{8} I_n(s) t^{n−1}/n!
        let mut sum = T::zero();
        let mut tp = T::one();
        let mut fact = T::one();
        for n in 1..=8u32 {
            fact = fact * T::lit(n as f64);
            sum = sum + moment_exp(n, s) * tp / fact;
            tp = tp * t;
        }
        sum
    } else {
        (f1(s + t) - f1(s)) / t
    }
}

/// A real rational function in `s4`, `t4` with `m` fixed, evaluated at
/// `s4 = e^{a/4}`, `t4 = e^{b/4}`.
#[derive(Clone, Debug)]
pub struct CompiledRational {
    num: Vec<(f64, i32, i32)>,
    den: Vec<(f64, i32, i32)>,
    source: String,
}

impl CompiledRational {
    /// Panics unless the function is real with `u`, `m` absent.
    pub fn new(f: &RationalFunction) -> CompiledRational {
        let compile = |p: &crate::Polynomial| {
            p.terms()
                .map(|(mono, c)| {
                    assert!(c.is_real(), "complex coefficient");
                    assert!(mono.exponent(Var::U) == 0 && mono.exponent(Var::M) == 0);
                    (c.to_complex::<f64>().re, mono.exponent(Var::S4) as i32, mono.exponent(Var::T4) as i32)
                })
                .collect()
        };
        CompiledRational { num: compile(f.num()), den: compile(f.den()), source: f.pretty() }
    }

    pub fn eval<T: Real>(&self, a: T, b: T) -> T {
        let q = T::lit(0.25);
        let poly = |p: &[(f64, i32, i32)]| {
            p.iter()
                .map(|&(c, i, j)| T::lit(c) * (q * (T::lit(i as f64) * a + T::lit(j as f64) * b)).exp())
                .sum::<T>()
        };
        poly(&self.num) / poly(&self.den)
    }
}

/// Expression in up to two real arguments `s`, `t`.
#[derive(Clone, Debug)]
pub enum ModularExpr {
    Const(f64),
    Arg(usize),
    Sum(Vec<ModularExpr>),
    Product(Vec<ModularExpr>),
    Quotient(Box<ModularExpr>, Box<ModularExpr>),
    Scale(f64, Box<ModularExpr>),
    Exp(Box<ModularExpr>),
    Sinh(Box<ModularExpr>),
    F1(Box<ModularExpr>),
    G2(Box<ModularExpr>, Box<ModularExpr>),
    /// Rational function at `(e^{args[0]}, e^{args[1]})`.
    Rational { f: Arc<CompiledRational>, args: Vec<ModularExpr> },
    /// `f(args…)`.
    Compose { f: Arc<ModularExpr>, args: Vec<ModularExpr> },
    /// `(f(a) − f(b))/(a − b)` for a one-argument `f`; singular on `a = b`,
    /// refused within `radius` of it.
    DivDiff { f: Arc<ModularExpr>, a: Box<ModularExpr>, b: Box<ModularExpr>, radius: f64 },
}

/// Radius around `a = b` inside which divided differences are refused.
pub const SINGULAR_RADIUS: f64 = 0.05;

pub fn arg(i: usize) -> ModularExpr {
    ModularExpr::Arg(i)
}

pub fn s() -> ModularExpr {
    arg(0)
}

pub fn t() -> ModularExpr {
    arg(1)
}

pub fn cst(x: f64) -> ModularExpr {
    ModularExpr::Const(x)
}

impl ModularExpr {
    pub fn scale(self, c: f64) -> ModularExpr {
        ModularExpr::Scale(c, Box::new(self))
    }

    pub fn exp(self) -> ModularExpr {
        ModularExpr::Exp(Box::new(self))
    }

    pub fn sinh(self) -> ModularExpr {
        ModularExpr::Sinh(Box::new(self))
    }

    pub fn f1(self) -> ModularExpr {
        ModularExpr::F1(Box::new(self))
    }

    pub fn g2(self, t: ModularExpr) -> ModularExpr {
        ModularExpr::G2(Box::new(self), Box::new(t))
    }

    pub fn div(self, d: ModularExpr) -> ModularExpr {
        ModularExpr::Quotient(Box::new(self), Box::new(d))
    }

    pub fn rational(f: &RationalFunction, args: Vec<ModularExpr>) -> ModularExpr {
        ModularExpr::Rational { f: Arc::new(CompiledRational::new(f)), args }
    }

    /// `self(args…)`.
    pub fn at(self: &Arc<Self>, args: Vec<ModularExpr>) -> ModularExpr {
        ModularExpr::Compose { f: Arc::clone(self), args }
    }

    /// `(self(a) − self(b))/(a − b)`.
    pub fn div_diff(self: &Arc<Self>, a: ModularExpr, b: ModularExpr) -> ModularExpr {
        ModularExpr::DivDiff { f: Arc::clone(self), a: Box::new(a), b: Box::new(b), radius: SINGULAR_RADIUS }
    }

    pub fn eval(&self, args: &[f64]) -> Result<f64, CurvatureError> {
        self.eval_generic(args)
    }

    pub fn eval_generic<T: Real>(&self, args: &[T]) -> Result<T, CurvatureError> {
        use ModularExpr::*;
        Ok(match self {
            Const(c) => T::lit(*c),
            Arg(i) => *args.get(*i).ok_or(CurvatureError::MissingArgument(*i))?,
            Sum(xs) => {
                let mut acc = T::zero();
                for x in xs {
                    acc = acc + x.eval_generic(args)?;
                }
                acc
            }
            Product(xs) => {
                let mut acc = T::one();
                for x in xs {
                    acc = acc * x.eval_generic(args)?;
                }
                acc
            }
            Quotient(n, d) => n.eval_generic(args)? / d.eval_generic(args)?,
            Scale(c, x) => T::lit(*c) * x.eval_generic(args)?,
            Exp(x) => x.eval_generic(args)?.exp(),
            Sinh(x) => x.eval_generic(args)?.sinh(),
            F1(x) => f1(x.eval_generic(args)?),
            G2(a, b) => g2(a.eval_generic(args)?, b.eval_generic(args)?),
            Rational { f, args: inner } => {
                let a = match inner.first() {
                    Some(x) => x.eval_generic(args)?,
                    None => T::zero(),
                };
                let b = match inner.get(1) {
                    Some(x) => x.eval_generic(args)?,
                    None => T::zero(),
                };
                f.eval(a, b)
            }
            Compose { f, args: inner } => {
                let vals = inner.iter().map(|x| x.eval_generic(args)).collect::<Result<Vec<T>, _>>()?;
                f.eval_generic(&vals)?
            }
            DivDiff { f, a, b, radius } => {
                let (a, b) = (a.eval_generic(args)?, b.eval_generic(args)?);
                let gap = (a - b).abs();
                if gap < T::lit(*radius) {
                    return Err(CurvatureError::SingularLocus {
                        node: self.to_string(),
                        distance: gap.to_f64().unwrap_or(f64::NAN),
                    });
                }
                (f.eval_generic(&[a])? - f.eval_generic(&[b])?) / (a - b)
            }
        })
    }
}

impl Add for ModularExpr {
    type Output = ModularExpr;
    fn add(self, o: ModularExpr) -> ModularExpr {
        match self {
            ModularExpr::Sum(mut xs) => {
                xs.push(o);
                ModularExpr::Sum(xs)
            }
            x => ModularExpr::Sum(vec![x, o]),
        }
    }
}

impl Sub for ModularExpr {
    type Output = ModularExpr;
    fn sub(self, o: ModularExpr) -> ModularExpr {
        self + (-o)
    }
}

impl Neg for ModularExpr {
    type Output = ModularExpr;
    fn neg(self) -> ModularExpr {
        self.scale(-1.0)
    }
}

impl Mul for ModularExpr {
    type Output = ModularExpr;
    fn mul(self, o: ModularExpr) -> ModularExpr {
        match self {
            ModularExpr::Product(mut xs) => {
                xs.push(o);
                ModularExpr::Product(xs)
            }
            x => ModularExpr::Product(vec![x, o]),
        }
    }
}

fn join(f: &mut fmt::Formatter<'_>, xs: &[ModularExpr], sep: &str) -> fmt::Result {
    for (k, x) in xs.iter().enumerate() {
        if k > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl Display for ModularExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ModularExpr::*;
        match self {
            Const(c) => write!(f, "{c}"),
            Arg(0) => f.write_str("s"),
            Arg(1) => f.write_str("t"),
            Arg(i) => write!(f, "x{i}"),
            Sum(xs) => {
                f.write_str("(")?;
                join(f, xs, " + ")?;
                f.write_str(")")
            }
            Product(xs) => join(f, xs, "*"),
            Quotient(n, d) => write!(f, "({n})/({d})"),
            Scale(c, x) if *c == -1.0 => write!(f, "-{x}"),
            Scale(c, x) => write!(f, "{c}*{x}"),
            Exp(x) => write!(f, "exp({x})"),
            Sinh(x) => write!(f, "sinh({x})"),
            F1(x) => write!(f, "f1({x})"),
            G2(a, b) => write!(f, "g2({a}, {b})"),
            Rational { f: r, args } => {
                write!(f, "[{}](", r.source)?;
                join(f, args, ", ")?;
                f.write_str(")")
            }
            Compose { f: g, args } => {
                write!(f, "{{{g}}}(")?;
                join(f, args, ", ")?;
                f.write_str(")")
            }
            DivDiff { f: g, a, b, .. } => write!(f, "dd[{g}]({a}, {b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f1_branches_agree() {
        for x in [1e-3, -1e-3, 9.99e-4, -9.99e-4] {
            let series = {
                let mut s = 1.0;
                let mut t = 1.0;
                for k in 1..12 {
                    t *= x / (k + 1) as f64;
                    s += t;
                }
                s
            };
            assert!((f1(x) - series).abs() < 1e-15);
        }
        assert_eq!(f1(0.0), 1.0);
    }

    #[test]
    fn g2_branches_agree() {
        assert!((g2(0.0f64, 0.0) - 0.5).abs() < 1e-15);
        for s in [-2.5, -0.3, 0.0, 0.7, 3.0, 7.5] {
            let near = g2::<f64>(s, 9.99e-4);
            let far = (f1(s + 9.99e-4) - f1(s)) / 9.99e-4;
            assert!((near - far).abs() < 1e-9, "s={s}: {near} vs {far}");
        }
    }

    #[test]
    fn divided_difference_refuses_the_diagonal() {
        let f = Arc::new(s().exp());
        let d = f.div_diff(s(), t());
        assert!((d.eval(&[1.0, 0.0]).unwrap() - (1f64.exp() - 1.0)).abs() < 1e-15);
        assert!(matches!(d.eval(&[0.01, 0.0]), Err(CurvatureError::SingularLocus { .. })));
    }
}
