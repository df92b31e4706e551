//! Structured pass/fail reports.
//!
//! Reports serialize to one JSON object per line. Timing is the only
//! nondeterministic field and can be left out of the rendering.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// First failing instance of a check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Where it failed, e.g. `x^5` or `(n,r,j,k)=(4,2,0,1)`.
    pub location: String,
    pub found: String,
    pub expected: String,
}

impl Counterexample {
    pub fn new(location: impl Into<String>, found: impl fmt::Display, expected: impl fmt::Display) -> Self {
        Counterexample {
            location: location.into(),
            found: found.to_string(),
            expected: expected.to_string(),
        }
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: found {}, expected {}", self.location, self.found, self.expected)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trunc: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub millis: Option<u64>,
}

impl VerificationReport {
    /// A passing report with no parameters; failures are recorded with
    /// [`VerificationReport::fail`].
    pub fn new(name: impl Into<String>) -> Self {
        VerificationReport {
            name: name.into(),
            params: BTreeMap::new(),
            status: Status::Pass,
            counterexample: None,
            notes: Vec::new(),
            trunc: None,
            millis: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn with_trunc(mut self, trunc: i64) -> Self {
        self.trunc = Some(trunc);
        self
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Marks the report failed. Only the first counterexample is kept.
    pub fn fail(&mut self, cex: Counterexample) {
        self.status = Status::Fail;
        if self.counterexample.is_none() {
            self.counterexample = Some(cex);
        }
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    /// Folds another report in as a sub-check; its failure becomes ours, with
    /// the location prefixed by the sub-check name.
    pub fn absorb(&mut self, sub: &VerificationReport) {
        for n in &sub.notes {
            self.notes.push(format!("{}: {}", sub.name, n));
        }
        if let Some(c) = &sub.counterexample {
            self.fail(Counterexample {
                location: format!("{}: {}", sub.name, c.location),
                ..c.clone()
            });
        } else if !sub.is_pass() {
            self.status = Status::Fail;
        }
    }

    pub fn to_json_line(&self, include_timing: bool) -> String {
        let mut r = self.clone();
        if !include_timing {
            r.millis = None;
        }
        serde_json::to_string(&r).expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        write!(f, "[{status}] {}", self.name)?;
        if let Some(c) = &self.counterexample {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}

/// Runs `check` and stamps the elapsed wall time on its report.
pub fn timed(check: impl FnOnce() -> VerificationReport) -> VerificationReport {
    let start = Instant::now();
    let mut report = check();
    report.millis = Some(start.elapsed().as_millis() as u64);
    report
}

/// Turns a hard error raised inside a check into a failed report.
pub fn from_error(name: &str, err: &crate::Error) -> VerificationReport {
    let mut r = VerificationReport::new(name);
    r.fail(Counterexample::new("error", err, "no error"));
    r
}
