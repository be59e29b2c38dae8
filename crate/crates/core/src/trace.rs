//! Sampled trajectories and their CSV / JSON forms.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::formula::Assignment;
use crate::integrator::{IntegratorConfig, SystemKind};
use crate::kernel::SystemParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub step: usize,
    pub t: f64,
    /// V for System I, E for System II; NaN when E is undefined for the formula.
    #[serde(with = "nan_as_null")]
    pub energy: f64,
    pub sat_count: usize,
    pub nae_count: usize,
    pub alpha: Vec<f64>,
    pub x: Assignment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub system: SystemKind,
    pub num_vars: usize,
    pub num_clauses: usize,
    pub params: SystemParams,
    pub config: IntegratorConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub meta: TraceMeta,
    pub rows: Vec<TraceRow>,
}

impl Trace {
    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFormat {
    Csv,
    Json,
}

impl std::str::FromStr for TraceFormat {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "csv" => Ok(TraceFormat::Csv),
            "json" => Ok(TraceFormat::Json),
            other => Err(crate::Error::InvalidParams(format!("unknown trace format `{other}`"))),
        }
    }
}

/// Header `step,t,energy,sat_count,nae_count,alpha_1..alpha_N,x_1..x_N`.
pub fn csv_header(num_vars: usize) -> String {
    let mut h = String::from("step,t,energy,sat_count,nae_count");
    for i in 1..=num_vars {
        let _ = write!(h, ",alpha_{i}");
    }
    for i in 1..=num_vars {
        let _ = write!(h, ",x_{i}");
    }
    h
}

pub fn trace_to_csv(trace: &Trace) -> String {
    let mut out = csv_header(trace.meta.num_vars);
    out.push('\n');
    for r in &trace.rows {
        let _ = write!(out, "{},{},{},{},{}", r.step, r.t, r.energy, r.sat_count, r.nae_count);
        for a in &r.alpha {
            let _ = write!(out, ",{a}");
        }
        for &b in r.x.bits() {
            out.push_str(if b { ",1" } else { ",0" });
        }
        out.push('\n');
    }
    out
}

pub fn trace_to_json(trace: &Trace) -> String {
    serde_json::to_string_pretty(trace).expect("trace serializes")
}

pub fn trace_from_json(text: &str) -> serde_json::Result<Trace> {
    serde_json::from_str(text)
}

pub fn emit_trace(trace: &Trace, format: TraceFormat, path: &Path) -> std::io::Result<()> {
    let body = match format {
        TraceFormat::Csv => trace_to_csv(trace),
        TraceFormat::Json => trace_to_json(trace),
    };
    std::fs::write(path, body)
}

mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}
