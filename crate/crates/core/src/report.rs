//! Run reports: tolerance checks, estimate records and a canonical JSON
//! encoding (sorted keys, every float with 17 significant digits) so that
//! identical runs produce byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::estimators::RadiusEstimate;
use crate::io::fmt_f64;
use crate::signal::GridSpec;
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    /// Pass when `measured ≤ tolerance`.
    Le,
    /// Pass when `measured ≥ tolerance`.
    Ge,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
}

impl Check {
    pub fn le(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Check { name: name.into(), measured, tolerance, comparison: Comparison::Le, pass: measured <= tolerance }
    }

    pub fn ge(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Check { name: name.into(), measured, tolerance, comparison: Comparison::Ge, pass: measured >= tolerance }
    }

    /// Boolean condition recorded as `measured = 1` or `0` against `≥ 1`.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check::ge(name, if ok { 1.0 } else { 0.0 }, 1.0)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.pass = match self.comparison {
            Comparison::Le => self.measured <= tolerance,
            Comparison::Ge => self.measured >= tolerance,
        };
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub name: String,
    pub estimate: RadiusEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub name: String,
    /// `tolerance`, a guard name, or `error`.
    pub kind: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub experiment: String,
    pub config: Value,
    pub grids: BTreeMap<String, GridSpec>,
    pub estimates: Vec<EstimateRecord>,
    pub checks: Vec<Check>,
    pub failures: Vec<Failure>,
    /// Free-form diagnostics (condition certificates, sublevel boxes, …).
    pub data: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(experiment: &str, config: Value) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            experiment: experiment.to_string(),
            config,
            grids: BTreeMap::new(),
            estimates: Vec::new(),
            checks: Vec::new(),
            failures: Vec::new(),
            data: BTreeMap::new(),
        }
    }

    /// Adds a check and, when it fails, a matching tolerance failure.
    pub fn check(&mut self, c: Check) {
        if !c.pass {
            let op = match c.comparison {
                Comparison::Le => "<=",
                Comparison::Ge => ">=",
            };
            self.failures.push(Failure {
                name: c.name.clone(),
                kind: "tolerance".into(),
                detail: format!("measured {} not {op} {}", fmt_f64(c.measured), fmt_f64(c.tolerance)),
            });
        }
        self.checks.push(c);
    }

    pub fn fail(&mut self, name: &str, e: &Error) {
        let kind = if e.is_guard() { e.guard_name() } else { "error" };
        self.failures.push(Failure { name: name.into(), kind: kind.into(), detail: e.to_string() });
    }

    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }

    /// First guard name among the failures.
    pub fn guard_failure(&self) -> Option<&str> {
        self.failures.iter().map(|f| f.kind.as_str()).find(|k| *k != "tolerance" && *k != "error")
    }

    pub fn to_canonical_json(&self) -> Result<String> {
        Ok(canonical_json(&serde_json::to_value(self)?))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_canonical_json()?)?;
        Ok(())
    }
}

/// Wall-clock timings, kept out of the report so that reports stay reproducible.
pub fn write_timings(path: &Path, timings: &[(String, f64)]) -> Result<()> {
    let map: serde_json::Map<String, Value> = timings.iter().map(|(k, v)| (k.clone(), Value::from(*v))).collect();
    fs::write(path, canonical_json(&Value::Object(map)))?;
    Ok(())
}

/// Pretty JSON with sorted keys and floats written as `{:.16e}`.
/// Non-finite floats cannot appear: serde encodes them as `null`.
pub fn canonical_json(v: &Value) -> String {
    let mut out = String::new();
    emit(v, 0, &mut out);
    out.push('\n');
    out
}

fn emit(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&fmt_f64(n.as_f64().unwrap()));
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(a) => {
            if a.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                emit(x, indent + 1, out);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(m) => {
            if m.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                emit(&m[*k], indent + 1, out);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}
