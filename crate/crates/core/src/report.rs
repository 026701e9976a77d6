//! Machine-readable run reports.
//!
//! Every real is written with 17 significant digits, so parsing a report and
//! writing it back reproduces it byte for byte. Keys come out sorted.

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};

use crate::error::{Error, Result};

pub const REPORT_VERSION: &str = "ivhh-report/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub version: String,
    /// The parsed command line, echoed back.
    pub config: Value,
    pub results: Value,
    /// Whether every requested verdict held.
    pub holds: bool,
    pub exit_code: i32,
    /// Wall-clock time; the one field that differs between identical runs.
    pub duration_ms: u64,
}

impl ReportDocument {
    pub fn new(config: impl Serialize, results: impl Serialize, holds: bool) -> Result<Self> {
        Ok(ReportDocument {
            version: REPORT_VERSION.to_string(),
            config: to_value(&config)?,
            results: to_value(&results)?,
            holds,
            exit_code: if holds { 0 } else { 1 },
            duration_ms: 0,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let value = normalize(to_value(self)?);
        serde_json::to_string_pretty(&value).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| Error::Config(format!("malformed report: {e}")))
    }

    /// The report with its duration zeroed, for comparing runs.
    pub fn without_duration(&self) -> Self {
        ReportDocument { duration_ms: 0, ..self.clone() }
    }
}

fn to_value(v: &impl Serialize) -> Result<Value> {
    serde_json::to_value(v).map(normalize).map_err(|e| Error::Config(e.to_string()))
}

/// `{:.16e}`: one digit before the point and sixteen after.
pub fn format_real(v: f64) -> String {
    let s = format!("{v:.16e}");
    // the JSON number parser writes nonnegative exponents with a sign
    match s.split_once('e') {
        Some((m, e)) if !e.starts_with('-') => format!("{m}e+{e}"),
        _ => s,
    }
}

/// Rewrites every non-integer number to the fixed 17-digit form.
pub fn normalize(value: Value) -> Value {
    match value {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => match n.as_f64() {
            Some(v) if v.is_finite() => Value::Number(Number::from_str(&format_real(v)).expect("valid JSON number")),
            _ => Value::Number(n),
        },
        Value::Array(items) => Value::Array(items.into_iter().map(normalize).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}
