//! Run reports and their text and JSON renderings.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::scenario::Expect;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotRepresentable,
    /// Any other error, e.g. a domain mismatch or a limit that did not stabilize.
    Error,
    ParseError,
    InvariantViolation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub index: usize,
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator: Option<String>,
    pub expect: Expect,
    pub status: Status,
    /// Whether the status matches the expectation.
    pub ok: bool,
    pub seed: u64,
    pub samples: usize,
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub ok: usize,
    pub unexpected: usize,
    pub passed: usize,
    pub failed: usize,
    pub not_representable: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub workbench: &'static str,
    pub scenario: String,
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn new(scenario: &str, seed: u64, samples: usize, checks: Vec<CheckResult>, elapsed_ms: Option<u64>) -> Report {
        let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
        let ok = checks.iter().filter(|c| c.ok).count();
        let summary = Summary {
            total: checks.len(),
            ok,
            unexpected: checks.len() - ok,
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            not_representable: count(Status::NotRepresentable),
            errors: count(Status::Error) + count(Status::ParseError) + count(Status::InvariantViolation),
        };
        Report { workbench: VERSION, scenario: scenario.to_owned(), seed, samples, checks, summary, elapsed_ms }
    }

    /// 0 when every check met its expectation, 3 on an internal invariant
    /// violation, 2 on a malformed check parameter, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        let has = |s: Status| self.checks.iter().any(|c| c.status == s);
        if has(Status::InvariantViolation) {
            3
        } else if has(Status::ParseError) {
            2
        } else if self.summary.unexpected > 0 {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "scenario {} (seed {}, samples {}, workbench {})",
            self.scenario, self.seed, self.samples, self.workbench
        );
        for c in &self.checks {
            let tag = if c.ok { "ok" } else { "UNEXPECTED" };
            let name = c.label.as_deref().unwrap_or(&c.check);
            let op = c.operator.as_deref().map(|o| format!(" [{o}]")).unwrap_or_default();
            let _ = write!(out, "{tag:>10} #{} {name}{op}: {}", c.index, status_word(c.status));
            if c.expect != Expect::Pass {
                let _ = write!(out, " (expected {})", expect_word(c.expect));
            }
            if let Some(ms) = c.elapsed_ms {
                let _ = write!(out, " in {ms} ms");
            }
            out.push('\n');
            if let Some(e) = &c.error {
                let _ = writeln!(out, "{:>12}{e}", "");
            }
            if !c.details.is_null() {
                let _ = writeln!(out, "{:>12}details: {}", "", brief(&c.details));
            }
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "{:>12}witness: {}", "", brief(w));
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "summary: {}/{} as expected ({} pass, {} fail, {} not representable, {} errors)",
            s.ok, s.total, s.passed, s.failed, s.not_representable, s.errors
        );
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(out, "elapsed: {ms} ms");
        }
        out
    }
}

const BRIEF_LIMIT: usize = 240;

fn brief(v: &Value) -> String {
    let s = v.to_string();
    if s.chars().count() <= BRIEF_LIMIT {
        s
    } else {
        let cut: String = s.chars().take(BRIEF_LIMIT).collect();
        format!("{cut}...")
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::NotRepresentable => "not representable",
        Status::Error => "error",
        Status::ParseError => "parse error",
        Status::InvariantViolation => "internal invariant violation",
    }
}

fn expect_word(e: Expect) -> &'static str {
    match e {
        Expect::Pass => "pass",
        Expect::Fail => "fail",
        Expect::NotRepresentable => "not representable",
    }
}
