//! Exact multivariate arithmetic over Gaussian rationals.
//!
//! Polynomials live in `Q(i)[u, m, s4, t4]`; rational functions are kept as
//! a numerator/denominator pair without multivariate gcd. Equality is
//! decided by cross-multiplication.

mod coeff;
mod parse;
mod poly;
mod ratfn;

pub use coeff::{Coeff, GaussRational, ParseGaussError};
pub use parse::parse_expr;
pub use poly::{Monomial, Polynomial, Var};
pub use ratfn::{Assignment, RationalFunction};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Threshold below which a denominator is treated as a pole by
/// [`RationalFunction::eval_numeric`].
pub const POLE_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("substitution makes the denominator vanish identically")]
    DenominatorVanishes,
    #[error("denominator magnitude {0:e} is below the pole threshold")]
    NearPole(f64),
    #[error("variable `{0}` has no assigned value")]
    UnassignedVariable(Var),
    #[error("parse error: {0}")]
    Parse(String),
}

/// `n / d` as a big rational.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
