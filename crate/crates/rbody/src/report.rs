//! Named checks with measured values, tolerances and pass/fail verdicts.

use serde::{Deserialize, Serialize};

/// One measured check. `anchor` is a short statement of the property the
/// check certifies, so a failure can be traced to the claim it tests.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a check that passes iff `measured <= tolerance`.
    pub fn check_le(&mut self, name: &str, anchor: &str, measured: f64, tolerance: f64) {
        self.checks.push(Check {
            name: name.into(),
            anchor: anchor.into(),
            measured,
            tolerance,
            passed: measured <= tolerance,
            note: None,
        });
    }

    /// Records a boolean check; `measured` is 1.0 on success, 0.0 otherwise.
    pub fn check_bool(&mut self, name: &str, anchor: &str, ok: bool) {
        self.checks.push(Check {
            name: name.into(),
            anchor: anchor.into(),
            measured: if ok { 1.0 } else { 0.0 },
            tolerance: 0.0,
            passed: ok,
            note: None,
        });
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn note_last(&mut self, note: String) {
        if let Some(c) = self.checks.last_mut() {
            c.note = Some(note);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
