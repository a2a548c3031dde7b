//! Pass/fail records produced by the multiplicity and reduction checks.

use alloc::string::String;
use alloc::vec::Vec;

/// One named check: an observed quantity compared against a bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub observed: f64,
    pub bound: f64,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, observed: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            passed,
            observed,
            bound,
            detail: String::new(),
        }
    }

    /// `observed <= bound`.
    pub fn at_most(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        Self::new(name, observed <= bound, observed, bound)
    }

    /// `observed >= bound`.
    pub fn at_least(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        Self::new(name, observed >= bound, observed, bound)
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

/// A titled group of checks plus free-form warnings.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerificationRecord {
    pub title: String,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
}

impl VerificationRecord {
    pub fn new(title: impl Into<String>) -> Self {
        VerificationRecord {
            title: title.into(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn warn(&mut self, warning: impl Into<String>) {
        self.warnings.push(warning.into());
    }

    /// All checks passed. A record without checks passes vacuously.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}
