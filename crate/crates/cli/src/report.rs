//! The JSON report every command emits.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Published JSON Schema for [`Report`].
pub const SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Rests on a stated expectation rather than a proof; never fails a run.
    Conjectural,
    Error,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn is_failure(self) -> bool {
        matches!(self, Status::Fail | Status::Error)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub details: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, details: Value) -> Self {
        Check { name: name.into(), status, details }
    }

    pub fn error(name: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Check::new(name, Status::Error, serde_json::json!({ "error": err.to_string() }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub checks: Vec<Check>,
    pub timing_ms: u64,
    pub version: String,
}

impl Report {
    /// Sorts checks by name so the output never depends on evaluation order.
    pub fn new(command: &str, config: Value, mut checks: Vec<Check>, timing_ms: u64) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        Report { command: command.to_string(), config, checks, timing_ms, version: VERSION.to_string() }
    }

    pub fn passed(&self) -> bool {
        !self.checks.iter().any(|c| c.status.is_failure())
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report values are plain JSON");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
