//! Check reports with reproducible witnesses.

use serde::Serialize;

/// Failures kept per report; the count is always exact.
pub const MAX_WITNESSES: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Where the check failed: signature, permutation, basis vector, ...
    pub at: String,
    pub expected: String,
    pub found: String,
}

impl Witness {
    pub fn new(at: impl Into<String>, expected: impl Into<String>, found: impl Into<String>) -> Self {
        Witness { at: at.into(), expected: expected.into(), found: found.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub check: String,
    pub passed: bool,
    pub checked: usize,
    /// Instances left out because a composite fell outside the truncation.
    pub skipped: usize,
    pub failure_count: usize,
    pub failures: Vec<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(check: impl Into<String>) -> Self {
        Report { check: check.into(), passed: true, checked: 0, skipped: 0, failure_count: 0, failures: Vec::new(), notes: Vec::new() }
    }

    /// Counts one instance; the witness is only built on failure.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        self.checked += 1;
        if !ok {
            self.fail(witness());
        }
    }

    pub fn fail(&mut self, w: Witness) {
        self.passed = false;
        self.failure_count += 1;
        if self.failures.len() < MAX_WITNESSES {
            self.failures.push(w);
        }
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Folds another report in (used when instances run in parallel).
    pub fn absorb(&mut self, other: Report) {
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.failure_count += other.failure_count;
        self.passed &= other.passed;
        for w in other.failures {
            if self.failures.len() < MAX_WITNESSES {
                self.failures.push(w);
            }
        }
        self.notes.extend(other.notes);
    }

    pub fn first_failure(&self) -> Option<&Witness> {
        self.failures.first()
    }
}
