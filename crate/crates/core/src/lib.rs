//! Exact derivation and numeric verification of the modular scalar
//! curvature of conformally perturbed Connes–Landi deformations.
//!
//! The symbolic pipeline runs
//! [`symcalc`] (resolvent symbols `b1`, `b2`) → [`cosphere`] (fibre
//! integration) → [`rearrange`] (normal ordering and spectral basis) →
//! [`curvature`] (per-dimension functions and functional relations),
//! entirely in exact arithmetic from [`exact`]. The [`oracle`] and
//! [`thetadeform`] modules provide independent finite-dimensional checks.

pub mod cosphere;
pub mod curvature;
pub mod exact;
pub mod fixtures;
pub mod oracle;
pub mod quadrature;
pub mod rearrange;
pub mod report;
pub mod scalar;
mod serde_util;
pub mod symcalc;
pub mod thetadeform;
pub mod verify;

pub use exact::{BigRational, GaussRational, Monomial, Var};
pub use scalar::Real;

/// Rational function over the Gaussian rationals.
pub type RationalFunction = exact::RationalFunction<GaussRational>;
/// Polynomial over the Gaussian rationals.
pub type Polynomial = exact::Polynomial<GaussRational>;
/// Real rational function, for callers that never need `i`.
pub type RealRationalFunction = exact::RationalFunction<BigRational>;
