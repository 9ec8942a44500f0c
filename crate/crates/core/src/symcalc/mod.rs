//! Noncommutative symbol calculus: atoms, differentiation rules, the
//! bi-differential product terms and the resolvent recursion.

mod atom;
mod resolvent;
mod rules;
mod term;
mod widom;

pub use atom::{Atom, AtomClass, AtomKind, Label};
pub use resolvent::{
    build_p_symbols, dirac_square_symbol, reconstruction_residual, resolvent_b0, resolvent_b1,
    resolvent_b1_unchecked, resolvent_b2, resolvent_b2_parts, PSymbols,
};
pub use rules::{horizontal_diff, horizontal_diff2, vertical_diff};
pub use term::{SymbolSum, SymbolTerm};
pub use widom::widom_product;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymbolError {
    #[error("product term a_{0} is not implemented")]
    UnsupportedOrder(u32),
    #[error("no {op} rule for atom {atom:?}")]
    NoRule { op: &'static str, atom: AtomKind },
    #[error("symbol differs from reference:\nexpected\n{expected}\nfound\n{found}")]
    ReferenceMismatch { expected: String, found: String },
    #[error("term `{term}` has xi-degree {degree}, expected {expected}")]
    GradingViolation { term: String, degree: i32, expected: i32 },
    #[error("parse error: {0}")]
    Parse(String),
}
