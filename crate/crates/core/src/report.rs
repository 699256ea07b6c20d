//! Pass/fail/skip reporting for verification sweeps.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail { witness: String },
    Skip { reason: String },
    /// Informational result, excluded from pass/fail accounting.
    Info { detail: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    #[serde(flatten)]
    pub outcome: Outcome,
}

/// An ordered list of named checks. Every verifier in this crate returns one
/// of these; a check either passes, fails with the first counterexample
/// found, or is skipped with a reason when its preconditions do not hold.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report { checks: Vec::new() }
    }

    pub fn pass(&mut self, name: &str) {
        self.checks.push(Check {
            name: name.to_string(),
            outcome: Outcome::Pass,
        });
    }

    pub fn fail(&mut self, name: &str, witness: String) {
        self.checks.push(Check {
            name: name.to_string(),
            outcome: Outcome::Fail { witness },
        });
    }

    pub fn skip(&mut self, name: &str, reason: String) {
        self.checks.push(Check {
            name: name.to_string(),
            outcome: Outcome::Skip { reason },
        });
    }

    pub fn info(&mut self, name: &str, detail: String) {
        self.checks.push(Check {
            name: name.to_string(),
            outcome: Outcome::Info { detail },
        });
    }

    /// Records a pass or a fail depending on `witness`.
    pub fn record(&mut self, name: &str, witness: Option<String>) {
        match witness {
            None => self.pass(name),
            Some(w) => self.fail(name, w),
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// True when no check failed (skips and infos do not count).
    pub fn ok(&self) -> bool {
        !self
            .checks
            .iter()
            .any(|c| matches!(c.outcome, Outcome::Fail { .. }))
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks
            .iter()
            .find(|c| matches!(c.outcome, Outcome::Fail { .. }))
    }

    /// One line per check, `status name [details]`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let line = match &c.outcome {
                Outcome::Pass => format!("pass  {}", c.name),
                Outcome::Fail { witness } => format!("FAIL  {}: {}", c.name, witness),
                Outcome::Skip { reason } => format!("skip  {} ({})", c.name, reason),
                Outcome::Info { detail } => format!("info  {}: {}", c.name, detail),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}
