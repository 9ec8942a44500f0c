//! Transcribed reference expressions, kept apart from the derivation so
//! both can be audited independently.

use crate::exact::parse_expr;
use crate::symcalc::{SymbolSum, SymbolTerm};
use crate::RationalFunction;

const REFERENCE: &str = include_str!("../data/reference.txt");

fn entries(name: &str) -> impl Iterator<Item = &'static str> + '_ {
    REFERENCE
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .filter_map(move |l| {
            let (k, v) = l.split_once(':')?;
            (k.trim() == name).then(|| v.trim())
        })
}

/// Rational-function entry by name; panics on a missing or malformed entry
/// since the data file is compiled in.
pub fn expression(name: &str) -> RationalFunction {
    let src = entries(name).next().unwrap_or_else(|| panic!("no reference entry `{name}`"));
    parse_expr(src).unwrap_or_else(|e| panic!("reference entry `{name}`: {e}"))
}

pub fn master_f() -> RationalFunction {
    expression("master_f")
}

pub fn master_g() -> RationalFunction {
    expression("master_g")
}

/// Listed one-variable function for `m ∈ {4, 6, 8}`.
pub fn listed_k(m: u32) -> Option<RationalFunction> {
    matches!(m, 4 | 6 | 8).then(|| expression(&format!("k{m}")))
}

/// Listed two-variable function for `m ∈ {4, 6, 8}`.
pub fn listed_h(m: u32) -> Option<RationalFunction> {
    matches!(m, 4 | 6 | 8).then(|| expression(&format!("h{m}")))
}

pub fn reference_b1() -> SymbolSum {
    entries("b1")
        .map(|src| src.parse::<SymbolTerm>().unwrap_or_else(|e| panic!("b1 entry: {e}")))
        .collect()
}
