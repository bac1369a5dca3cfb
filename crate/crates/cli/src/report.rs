//! Report assembly. The body is a deterministic function of the input bytes,
//! flags and seed; timing lives in the header.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use rackforge::report::{Check, VerificationReport};

pub const FORMAT: u32 = 1;

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Finite numbers as JSON numbers; `inf` and `nan` as strings.
pub fn number(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    /// One-based indices.
    pub location: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub defect: Vec<String>,
    pub magnitude: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: &'static str,
    pub max_defect: Value,
    pub evaluated: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn from_check(c: &Check) -> Self {
        Self {
            name: c.name.clone(),
            status: if c.passed { "pass" } else { "fail" },
            max_defect: number(c.max_defect),
            evaluated: c.evaluated,
            counterexample: c.first_violation().map(|v| Counterexample {
                location: v.location.iter().map(|i| i + 1).collect(),
                defect: v.defect.clone(),
                magnitude: number(v.magnitude),
            }),
            note: c.note.clone(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportBody {
    pub command: String,
    pub input: String,
    pub input_digest: String,
    pub seed: Option<u64>,
    pub params: BTreeMap<String, Value>,
    pub status: &'static str,
    pub checks: Vec<CheckRecord>,
    pub data: BTreeMap<String, Value>,
}

/// Report under construction.
#[derive(Debug, Clone)]
pub struct Report {
    pub body: ReportBody,
}

impl Report {
    pub fn new(command: &str, input: &str, input_digest: String, seed: Option<u64>) -> Self {
        Self {
            body: ReportBody {
                command: command.to_string(),
                input: input.to_string(),
                input_digest,
                seed,
                params: BTreeMap::new(),
                status: "pass",
                checks: Vec::new(),
                data: BTreeMap::new(),
            },
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.body.params.insert(key.to_string(), json!(value));
    }

    pub fn data(&mut self, key: &str, value: impl Serialize) {
        self.body.data.insert(key.to_string(), json!(value));
    }

    pub fn check(&mut self, c: &Check) {
        self.push(CheckRecord::from_check(c));
    }

    /// Adds every check of `r`, prefixing names with `prefix.` when given.
    pub fn checks(&mut self, prefix: Option<&str>, r: &VerificationReport) {
        for c in &r.checks {
            let mut rec = CheckRecord::from_check(c);
            if let Some(p) = prefix {
                rec.name = format!("{p}.{}", rec.name);
            }
            self.push(rec);
        }
    }

    /// A failed check standing for a computation that could not finish.
    pub fn failure(&mut self, name: &str, note: impl Into<String>) {
        let mut c = Check::new(name);
        c.fail(note);
        self.check(&c);
    }

    pub fn push(&mut self, rec: CheckRecord) {
        if !rec.passed() {
            self.body.status = "fail";
        }
        self.body.checks.push(rec);
    }

    pub fn passed(&self) -> bool {
        self.body.status == "pass"
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn body_json(&self) -> String {
        serde_json::to_string(&self.body).expect("report body serializes")
    }

    /// `{"format":1,"header":{...},"body":{...}}` on one line.
    pub fn render(&self, started_unix_ms: u128, wall_time_ms: f64) -> String {
        let body = self.body_json();
        let header = json!({
            "tool": "rackforge",
            "version": env!("CARGO_PKG_VERSION"),
            "started_unix_ms": started_unix_ms as u64,
            "wall_time_ms": wall_time_ms,
            "body_sha256": digest(body.as_bytes()),
        });
        format!("{{\"format\":{FORMAT},\"header\":{header},\"body\":{body}}}")
    }

    /// One line per check.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "{} {} [{}]: {}\n",
            self.body.command,
            self.body.input,
            &self.body.input_digest[..12.min(self.body.input_digest.len())],
            self.body.status
        );
        for c in &self.body.checks {
            out.push_str(&format!("  {:<4} {:<40} max_defect={}", c.status, c.name, c.max_defect));
            if let Some(ce) = &c.counterexample {
                out.push_str(&format!(" at {:?}", ce.location));
            }
            if let Some(n) = &c.note {
                out.push_str(&format!(" ({n})"));
            }
            out.push('\n');
        }
        out
    }
}
