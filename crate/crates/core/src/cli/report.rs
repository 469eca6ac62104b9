//! Machine-readable run summaries.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One measured quantity compared against its threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
    /// The mathematical statement this check shadows.
    pub claim: String,
}

impl Check {
    pub fn below(name: &str, value: f64, threshold: f64, claim: &str) -> Self {
        Check { name: name.into(), value, threshold, pass: value < threshold, claim: claim.into() }
    }

    pub fn above(name: &str, value: f64, threshold: f64, claim: &str) -> Self {
        Check { name: name.into(), value, threshold, pass: value > threshold, claim: claim.into() }
    }

    /// A boolean condition, stored as value 1/0 against threshold 1.
    pub fn holds(name: &str, ok: bool, claim: &str) -> Self {
        Check { name: name.into(), value: if ok { 1.0 } else { 0.0 }, threshold: 1.0, pass: ok, claim: claim.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    /// The initial data violate the scenario's hypothesis; nothing is certified.
    OutOfWindow,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub outcome: Outcome,
    pub checks: Vec<Check>,
    pub trajectories: Vec<PathBuf>,
    pub wall_time_s: f64,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl ScenarioReport {
    pub fn new(scenario: &str) -> Self {
        ScenarioReport {
            scenario: scenario.into(),
            outcome: Outcome::Pass,
            checks: Vec::new(),
            trajectories: Vec::new(),
            wall_time_s: 0.0,
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Sets the outcome from the checks unless the run was out of window.
    pub fn finalize(&mut self, wall_time_s: f64) {
        self.wall_time_s = wall_time_s;
        if self.outcome != Outcome::OutOfWindow {
            self.outcome = if self.checks.iter().all(|c| c.pass) { Outcome::Pass } else { Outcome::Fail };
        }
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").map_err(|source| Error::Io { path: path.to_path_buf(), source })
    }
}

impl fmt::Display for ScenarioReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {}: {:?} ({:.1} s)", self.scenario, self.outcome, self.wall_time_s)?;
        for c in &self.checks {
            let mark = if c.pass { "PASS" } else { "FAIL" };
            writeln!(f, "  [{mark}] {:<28} value {:<12.6e} threshold {:<12.6e} {}", c.name, c.value, c.threshold, c.claim)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcome_follows_checks() {
        let mut r = ScenarioReport::new("x");
        r.push(Check::below("a", 1.0, 2.0, "c"));
        r.finalize(0.0);
        assert!(r.passed());
        r.push(Check::above("b", 1.0, 2.0, "c"));
        r.finalize(0.0);
        assert_eq!(r.outcome, Outcome::Fail);
        let mut w = ScenarioReport::new("y");
        w.outcome = Outcome::OutOfWindow;
        w.finalize(0.0);
        assert_eq!(w.outcome, Outcome::OutOfWindow);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<ScenarioReport>(&json).unwrap(), r);
    }
}
