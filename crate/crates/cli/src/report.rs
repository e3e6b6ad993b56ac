//! Report envelope shared by `verify` and `sweep`.
//!
//! JSON is canonical. Wall-clock time is never serialized, so two runs with the
//! same configuration and seed produce byte-identical output.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::config::{ConfigEcho, RunConfig};
use crate::CliResult;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub check_id: String,
    pub parameters: Map<String, Value>,
    /// `None` when skipped or when the check could not be evaluated.
    pub residual: Option<f64>,
    /// Exact checks carry tolerance 0.
    pub tolerance: f64,
    /// `None` for skipped records.
    pub pass: Option<bool>,
    pub status: Status,
    /// Why a record was skipped, or the error that made it fail.
    pub reason: Option<String>,
}

impl Record {
    /// Passes iff `residual ≤ tolerance`; a NaN residual fails.
    pub fn measured(id: &str, parameters: Value, residual: f64, tolerance: f64) -> Self {
        let pass = residual <= tolerance;
        Self::with_verdict(id, parameters, residual, tolerance, pass)
    }

    pub fn with_verdict(id: &str, parameters: Value, residual: f64, tolerance: f64, pass: bool) -> Self {
        Self {
            check_id: id.into(),
            parameters: object(parameters),
            residual: Some(residual),
            tolerance,
            pass: Some(pass),
            status: if pass { Status::Pass } else { Status::Fail },
            reason: None,
        }
    }

    pub fn skipped(id: &str, parameters: Value, reason: &str) -> Self {
        Self {
            check_id: id.into(),
            parameters: object(parameters),
            residual: None,
            tolerance: 0.0,
            pass: None,
            status: Status::Skipped,
            reason: Some(reason.into()),
        }
    }

    pub fn errored(id: &str, parameters: Value, tolerance: f64, err: impl std::fmt::Display) -> Self {
        Self {
            check_id: id.into(),
            parameters: object(parameters),
            residual: None,
            tolerance,
            pass: Some(false),
            status: Status::Fail,
            reason: Some(err.to_string()),
        }
    }
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        Value::Null => Map::new(),
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of(records: &[Record]) -> Self {
        let count = |s| records.iter().filter(|r| r.status == s).count();
        Self {
            total: records.len(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            skipped: count(Status::Skipped),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportEnvelope {
    pub schema_version: u32,
    pub tool: Tool,
    pub command: &'static str,
    pub config: ConfigEcho,
    pub summary: Summary,
    pub records: Vec<Record>,
}

impl ReportEnvelope {
    pub fn new(config: &RunConfig, records: Vec<Record>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: Tool { name: "ccr", version: env!("CARGO_PKG_VERSION") },
            command: config.command,
            config: config.echo(),
            summary: Summary::of(&records),
            records,
        }
    }
}

pub fn to_json(env: &ReportEnvelope) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(env)?;
    s.push('\n');
    Ok(s)
}

fn float_cell(x: Option<f64>) -> String {
    x.map(|v| format!("{v:e}")).unwrap_or_default()
}

/// Flat projection: one row per record, parameters omitted.
pub fn to_csv(env: &ReportEnvelope) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check_id", "status", "residual", "tolerance", "reason"])?;
    for r in &env.records {
        let status = match r.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        };
        w.write_record([
            r.check_id.as_str(),
            status,
            &float_cell(r.residual),
            &float_cell(Some(r.tolerance)),
            r.reason.as_deref().unwrap_or(""),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
}
