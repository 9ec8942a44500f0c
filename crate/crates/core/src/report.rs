//! Verification reports shared by every suite.

use std::fmt::{self, Display};

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Largest observed deviation; `None` for exact checks.
    pub max_error: Option<f64>,
    pub tolerance: Option<f64>,
    /// Set when an exact comparison failed.
    pub exact_mismatch: bool,
    pub details: String,
}

impl Check {
    pub fn exact(name: impl Into<String>, ok: bool, details: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            max_error: None,
            tolerance: None,
            exact_mismatch: !ok,
            details: details.into(),
        }
    }

    /// Passes iff `error < tol`; NaN errors fail.
    pub fn numeric(name: impl Into<String>, error: f64, tol: f64, details: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            status: if error < tol { Status::Pass } else { Status::Fail },
            max_error: Some(error),
            tolerance: Some(tol),
            exact_mismatch: false,
            details: details.into(),
        }
    }

    pub fn skip(name: impl Into<String>, details: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            status: Status::Skip,
            max_error: None,
            tolerance: None,
            exact_mismatch: false,
            details: details.into(),
        }
    }

    pub fn failed(name: impl Into<String>, details: impl Into<String>) -> Check {
        Check::exact(name, false, details)
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> VerificationReport {
        VerificationReport { suite: suite.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    /// True iff no non-skipped check failed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    /// Merges reports of repeated cases: one check per name, failing if any
    /// case failed, carrying the worst error and the details of that case.
    pub fn merge_worst(suite: impl Into<String>, reports: impl IntoIterator<Item = VerificationReport>) -> VerificationReport {
        let mut out = VerificationReport::new(suite);
        let mut counts: Vec<usize> = Vec::new();
        for c in reports.into_iter().flat_map(|r| r.checks) {
            match out.checks.iter().position(|o| o.name == c.name) {
                None => {
                    out.checks.push(c);
                    counts.push(1);
                }
                Some(k) => {
                    counts[k] += 1;
                    let o = &mut out.checks[k];
                    let worse = match (c.max_error, o.max_error) {
                        (Some(a), Some(b)) => a > b || a.is_nan(),
                        _ => false,
                    };
                    let fails = c.status == Status::Fail && o.status != Status::Fail;
                    if fails || (worse && !(o.status == Status::Fail && c.status != Status::Fail)) {
                        *o = c;
                    }
                }
            }
        }
        for (c, n) in out.checks.iter_mut().zip(counts) {
            c.details = if c.details.is_empty() { format!("{n} cases") } else { format!("{n} cases, worst {}", c.details) };
        }
        out
    }

    /// Largest numeric error among the checks, ignoring exact ones.
    pub fn max_error(&self) -> f64 {
        self.checks.iter().filter_map(|c| c.max_error).fold(0.0, f64::max)
    }
}

impl Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        writeln!(f, "suite {}", self.suite)?;
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skip => "skip",
            };
            let err = match (c.max_error, c.tolerance) {
                (Some(e), Some(t)) => format!("{e:.3e} < {t:.0e}"),
                (Some(e), None) => format!("{e:.3e}"),
                _ if c.exact_mismatch => "mismatch".to_string(),
                _ => "exact".to_string(),
            };
            writeln!(f, "  {status}  {:width$}  {err:>20}  {}", c.name, c.details)?;
        }
        Ok(())
    }
}
