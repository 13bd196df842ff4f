//! Certification harness: identity residuals, inequality scans, the
//! residual of the `Φ` wave equation and refinement studies.

pub mod convergence;
pub mod identities;
pub mod residual;
pub mod scans;
pub mod suites;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use convergence::{convergence_study, ConvergenceProblem, ConvergenceReport, OrderEstimate, StudyParams};
pub use identities::{IdentitySample, SampleSet};
pub use residual::{residual_phi_equation, PhiResidual};
pub use scans::{corollary1_scan, hardy_family, lemma1_scan, Corollary1Params, Corollary1Scan, HardyMember, Lemma1Params, Lemma1Scan};
pub use suites::{run_suite, Suite, SuiteOptions};

/// Direction of the comparison a check makes against its bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

/// One line of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub check_name: String,
    /// The relation being certified, in words.
    pub eq_tag: String,
    pub value: f64,
    pub tol: f64,
    pub comparison: Comparison,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckEntry {
    /// Passes when `value ≤ tol` (and `value` is not NaN).
    pub fn at_most(name: &str, tag: &str, value: f64, tol: f64) -> Self {
        CheckEntry {
            check_name: name.into(),
            eq_tag: tag.into(),
            value,
            tol,
            comparison: Comparison::AtMost,
            pass: value <= tol,
            detail: None,
        }
    }

    /// Passes when `value ≥ bound`.
    pub fn at_least(name: &str, tag: &str, value: f64, bound: f64) -> Self {
        CheckEntry {
            check_name: name.into(),
            eq_tag: tag.into(),
            value,
            tol: bound,
            comparison: Comparison::AtLeast,
            pass: value >= bound,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<CheckEntry>,
    /// Grid, quadrature and scan parameters the numbers depend on.
    pub provenance: BTreeMap<String, String>,
}

impl VerificationReport {
    pub fn new(suite: &str) -> Self {
        VerificationReport { suite: suite.into(), ..Default::default() }
    }

    pub fn push(&mut self, entry: CheckEntry) {
        self.checks.push(entry);
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.provenance.insert(key.into(), value.to_string());
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
        for (k, v) in other.provenance {
            self.provenance.insert(k, v);
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Fixed-width text table, one row per check.
    pub fn to_table(&self) -> String {
        let w = self.checks.iter().map(|c| c.check_name.len()).max().unwrap_or(5).max(5);
        let mut s = String::new();
        let _ = writeln!(s, "suite: {}", self.suite);
        let _ = writeln!(s, "{:<w$}  {:>6}  {:>24}  {:>2}  {:>12}", "check", "status", "value", "", "bound");
        for c in &self.checks {
            let op = match c.comparison {
                Comparison::AtMost => "<=",
                Comparison::AtLeast => ">=",
            };
            let status = if c.pass { "pass" } else { "FAIL" };
            let _ = writeln!(s, "{:<w$}  {:>6}  {:>24e}  {:>2}  {:>12e}", c.check_name, status, c.value, op, c.tol);
        }
        for (k, v) in &self.provenance {
            let _ = writeln!(s, "  {k} = {v}");
        }
        s
    }
}
