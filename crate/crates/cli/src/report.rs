//! Reports: a stable-ordered JSON document, or an indented text rendering of it.

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use valuations::{Estimate, Rational, RealValue};

pub const REPORT_SCHEMA: &str = "valuations-report/1";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: String,
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub results: Value,
    pub probe_families: Vec<String>,
    pub versions: Map<String, Value>,
}

impl Report {
    pub fn new(command: Vec<String>, inputs_digest: String, results: Value, probe_families: Vec<String>) -> Self {
        let mut versions = Map::new();
        versions.insert("valuations".into(), Value::String(env!("CARGO_PKG_VERSION").into()));
        versions.insert("scene_schema".into(), Value::String(crate::scene::SCENE_SCHEMA.into()));
        Report { schema: REPORT_SCHEMA.into(), command, inputs_digest, results, probe_families, versions }
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("report is plain data")
    }
}

/// Output formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub fn emit(report: &Report, format: Format) -> String {
    let value = report.to_value();
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("serializable");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            render(&value, 0, &mut out);
            out
        }
    }
}

fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if is_scalar(x) {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar(x)));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render(x, depth + 1, out);
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                if is_scalar(x) {
                    out.push_str(&format!("{pad}- {}\n", scalar(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    render(x, depth + 1, out);
                }
            }
        }
        x => out.push_str(&format!("{pad}{}\n", scalar(x))),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Object(_) | Value::Array(_))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// SHA-256 over the scene bytes followed by the canonical option string.
pub fn inputs_digest(scene: &[u8], options: &str) -> String {
    let mut h = Sha256::new();
    h.update(scene);
    h.update([0u8]);
    h.update(options.as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn rational(q: &Rational) -> Value {
    Value::String(q.to_string())
}

pub fn rationals(qs: &[Rational]) -> Value {
    Value::Array(qs.iter().map(rational).collect())
}

pub fn real(v: &RealValue) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// A Monte-Carlo estimate with its seed, tagged and bounded by four standard errors.
pub fn estimate(e: &Estimate, seed: u64) -> Value {
    json!({
        "estimate": e.estimate,
        "std_error": e.std_error,
        "error_bound": 4.0 * e.std_error,
        "samples": e.samples,
        "seed": seed,
        "method": "monte_carlo",
    })
}
