//! Verification reports shared by every checker.

use serde::Serialize;

/// A single failing location found by a check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// Zero-based indices identifying the failure (basis indices or sample number).
    pub location: Vec<usize>,
    /// Defect vector, rendered in the scalar mode of the check.
    pub defect: Vec<String>,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub max_defect: f64,
    /// Number of cases evaluated.
    pub evaluated: usize,
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: true,
            max_defect: 0.0,
            evaluated: 0,
            violations: Vec::new(),
            note: None,
        }
    }

    /// Records one evaluated case. `failed` decides pass/fail independently
    /// of `magnitude` so exact checks can use zero tests.
    pub fn record(&mut self, location: Vec<usize>, defect: Vec<String>, magnitude: f64, failed: bool) {
        self.evaluated += 1;
        let magnitude = if magnitude.is_nan() { f64::INFINITY } else { magnitude };
        self.max_defect = self.max_defect.max(magnitude);
        if failed {
            self.passed = false;
            self.violations.push(Violation {
                location,
                defect,
                magnitude,
            });
        }
    }

    /// Records a sampled case against an absolute tolerance, keeping only
    /// the first counterexample.
    pub fn record_sample(&mut self, location: Vec<usize>, magnitude: f64, tol: f64) {
        let failed = !(magnitude < tol);
        let keep = failed && self.violations.is_empty();
        self.evaluated += 1;
        let magnitude = if magnitude.is_nan() { f64::INFINITY } else { magnitude };
        self.max_defect = self.max_defect.max(magnitude);
        if failed {
            self.passed = false;
        }
        if keep {
            self.violations.push(Violation {
                location,
                defect: Vec::new(),
                magnitude,
            });
        }
    }

    pub fn fail(&mut self, note: impl Into<String>) {
        self.passed = false;
        self.note = Some(note.into());
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn max_defect(&self) -> f64 {
        self.checks.iter().map(|c| c.max_defect).fold(0.0, f64::max)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}
