use serde::Serialize;

/// Pass/fail evidence for a property checked over an enumerated domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub name: String,
    /// Number of individual checks whose hypothesis applied.
    pub checked: u64,
    pub violations: u64,
    /// Smallest `observed − bound` seen, when the check has a slack.
    pub min_slack: Option<i64>,
    pub first_violation: Option<String>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            checked: 0,
            violations: 0,
            min_slack: None,
            first_violation: None,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some(describe());
            }
        }
    }

    pub fn record_slack(&mut self, slack: i64) {
        self.min_slack = Some(self.min_slack.map_or(slack, |s| s.min(slack)));
    }

    /// Folds another report's counts into this one.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.checked += other.checked;
        self.violations += other.violations;
        if let Some(s) = other.min_slack {
            self.record_slack(s);
        }
        if self.first_violation.is_none() {
            self.first_violation = other.first_violation;
        }
        self.notes.extend(other.notes);
    }
}
