//! Machine-readable verification records.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::exactlin::{format_rational, SparseVec};

/// Findings kept verbatim in a report; the total count is always exact.
pub const MAX_FINDINGS: usize = 32;

/// One witness of a failed check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Finding {
    /// The offending input tuple.
    pub input: Value,
    /// Defect vector, rank table or free-form detail.
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub params: BTreeMap<String, Value>,
    pub pass: bool,
    pub findings: Vec<Finding>,
    pub total_findings: usize,
    /// Summary values that are not pass/fail (ranks, orders, counts).
    pub summary: BTreeMap<String, Value>,
    pub notes: Vec<String>,
    pub timing_ms: u128,
}

impl VerificationReport {
    pub fn new(check: &str) -> Self {
        Self {
            check: check.to_string(),
            params: BTreeMap::new(),
            pass: true,
            findings: Vec::new(),
            total_findings: 0,
            summary: BTreeMap::new(),
            notes: Vec::new(),
            timing_ms: 0,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl Into<Value>) {
        self.params.insert(key.to_string(), value.into());
    }

    pub fn set_summary(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.to_string(), value.into());
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Records a failure. `pass` stays in sync with the finding count.
    pub fn fail(&mut self, input: Value, detail: Value) {
        self.total_findings += 1;
        if self.findings.len() < MAX_FINDINGS {
            self.findings.push(Finding { input, detail });
        }
        self.pass = false;
    }

    /// Merges the findings of `other` into `self`.
    pub fn absorb(&mut self, other: VerificationReport) {
        let dropped = other.total_findings - other.findings.len();
        for f in other.findings {
            self.fail(f.input, f.detail);
        }
        self.total_findings += dropped;
        self.pass = self.total_findings == 0;
    }

    pub fn timed(mut self, started: Instant) -> Self {
        self.timing_ms = started.elapsed().as_millis();
        self
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("reports are plain data")
    }

    /// Human-readable rendering; one header line plus indented details.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = match self.summary.get("status").and_then(Value::as_str) {
            Some(status) => status.to_uppercase().replace('_', " "),
            None if self.pass => "PASS".to_string(),
            None => "FAIL".to_string(),
        };
        let _ = write!(out, "[{verdict}] {}", self.check);
        if !self.params.is_empty() {
            let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = write!(out, " ({})", params.join(", "));
        }
        out.push('\n');
        for (k, v) in &self.summary {
            let _ = writeln!(out, "  {k}: {v}");
        }
        for note in &self.notes {
            let _ = writeln!(out, "  note: {note}");
        }
        for f in &self.findings {
            let _ = writeln!(out, "  witness {} -> {}", f.input, f.detail);
        }
        if self.total_findings > self.findings.len() {
            let _ = writeln!(out, "  ... {} findings in total", self.total_findings);
        }
        out
    }
}

/// Renders `Σ c_k e_k` as `{"name_k": "c_k"}` using the given basis names.
pub fn vector_json(v: &SparseVec, name: impl Fn(usize) -> String) -> Value {
    let map: serde_json::Map<String, Value> = v
        .iter()
        .map(|(&k, c)| (name(k), json!(format_rational(c))))
        .collect();
    Value::Object(map)
}

/// Renders a vector as `c1*name1 + c2*name2`.
pub fn vector_text(v: &SparseVec, name: impl Fn(usize) -> String) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (&k, c) in v.iter() {
        let coeff = format_rational(c);
        parts.push(match coeff.as_str() {
            "1" => name(k),
            "-1" => format!("-{}", name(k)),
            _ => format!("{coeff}*{}", name(k)),
        });
    }
    parts.join(" + ").replace("+ -", "- ")
}
