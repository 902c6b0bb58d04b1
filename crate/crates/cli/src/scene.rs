//! JSON scenes: named bodies, densities and Θ-valuations in one dimension.
//!
//! ```json
//! {
//!   "schema": "valuations-scene/1",
//!   "dimension": 2,
//!   "bodies": {"K": [["0", "0"], ["1", "0"], ["0", "1"]]},
//!   "densities": {"F": {"monomials": [{"exponents": [1, 0], "coeff": "1"}]}},
//!   "valuations": {
//!     "phi": {"terms": [{"coeff": "1", "density": "F", "bodies": ["K"]}]},
//!     "chi": {"builtin": "euler"}
//!   }
//! }
//! ```
//!
//! A term without `density` uses Lebesgue measure. Builtins are `euler` and
//! `volume`.

use std::collections::BTreeMap;

use serde::Deserialize;
use thiserror::Error;
use valuations::{euler, DensityRecord, PolyDensity, Polytope, Rational, ThetaTerm, ThetaValuation};

pub const SCENE_SCHEMA: &str = "valuations-scene/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SceneError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unknown {kind} id {id:?}")]
    Reference { kind: &'static str, id: String },
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    Dimension { context: String, expected: usize, found: usize },
    #[error("invalid scene: {0}")]
    Invalid(String),
}

impl SceneError {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            SceneError::Parse { .. } => "parse",
            SceneError::Reference { .. } => "reference",
            SceneError::Dimension { .. } => "dimension",
            SceneError::Invalid(_) => "invalid",
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneFile {
    #[serde(default)]
    schema: Option<String>,
    dimension: usize,
    #[serde(default)]
    bodies: BTreeMap<String, Vec<Vec<Rational>>>,
    #[serde(default)]
    densities: BTreeMap<String, DensityRecord>,
    #[serde(default)]
    valuations: BTreeMap<String, ValuationRecord>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ValuationRecord {
    Builtin { builtin: String },
    Terms { terms: Vec<TermRecord> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRecord {
    #[serde(default = "Rational::one")]
    coeff: Rational,
    #[serde(default)]
    density: Option<String>,
    #[serde(default)]
    bodies: Vec<String>,
}

/// A validated scene; every reference resolved and every dimension equal.
#[derive(Clone, Debug)]
pub struct Scene {
    pub dimension: usize,
    pub bodies: BTreeMap<String, Polytope>,
    pub densities: BTreeMap<String, PolyDensity>,
    pub valuations: BTreeMap<String, ThetaValuation>,
}

impl Scene {
    pub fn body(&self, id: &str) -> Result<&Polytope, SceneError> {
        self.bodies.get(id).ok_or_else(|| SceneError::Reference { kind: "body", id: id.to_string() })
    }

    pub fn density(&self, id: &str) -> Result<&PolyDensity, SceneError> {
        self.densities.get(id).ok_or_else(|| SceneError::Reference { kind: "density", id: id.to_string() })
    }

    pub fn valuation(&self, id: &str) -> Result<&ThetaValuation, SceneError> {
        self.valuations.get(id).ok_or_else(|| SceneError::Reference { kind: "valuation", id: id.to_string() })
    }
}

pub fn parse_scene_str(text: &str) -> Result<Scene, SceneError> {
    let file: SceneFile = serde_json::from_str(text).map_err(|e| SceneError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if let Some(schema) = &file.schema {
        if schema != SCENE_SCHEMA {
            return Err(SceneError::Invalid(format!("unsupported schema {schema:?}")));
        }
    }
    let n = file.dimension;
    if n == 0 {
        return Err(SceneError::Invalid("dimension must be positive".into()));
    }
    let mut bodies = BTreeMap::new();
    for (id, verts) in file.bodies {
        if let Some(v) = verts.iter().find(|v| v.len() != n) {
            return Err(SceneError::Dimension { context: format!("body {id:?}"), expected: n, found: v.len() });
        }
        let p = Polytope::new(&verts).map_err(|e| SceneError::Invalid(format!("body {id:?}: {e}")))?;
        bodies.insert(id, p);
    }
    let mut densities = BTreeMap::new();
    for (id, rec) in file.densities {
        if let Some(m) = rec.monomials.iter().find(|m| m.exponents.len() != n) {
            return Err(SceneError::Dimension {
                context: format!("density {id:?}"),
                expected: n,
                found: m.exponents.len(),
            });
        }
        let d = PolyDensity::from_record(n, &rec).map_err(|e| SceneError::Invalid(format!("density {id:?}: {e}")))?;
        densities.insert(id, d);
    }
    let mut valuations = BTreeMap::new();
    for (id, rec) in file.valuations {
        let v = match rec {
            ValuationRecord::Builtin { builtin } => match builtin.as_str() {
                "euler" => euler(n),
                "volume" => ThetaValuation::lebesgue(n),
                other => return Err(SceneError::Invalid(format!("valuation {id:?}: unknown builtin {other:?}"))),
            },
            ValuationRecord::Terms { terms } => {
                let mut out = Vec::with_capacity(terms.len());
                for t in terms {
                    let density = match &t.density {
                        None => PolyDensity::lebesgue(n),
                        Some(d) => densities
                            .get(d)
                            .cloned()
                            .ok_or_else(|| SceneError::Reference { kind: "density", id: d.clone() })?,
                    };
                    let bs = t
                        .bodies
                        .iter()
                        .map(|b| {
                            bodies.get(b).cloned().ok_or_else(|| SceneError::Reference { kind: "body", id: b.clone() })
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    out.push(ThetaTerm::new(t.coeff, density, bs).map_err(|e| SceneError::Invalid(e.to_string()))?);
                }
                ThetaValuation::new(n, out).map_err(|e| SceneError::Invalid(e.to_string()))?
            }
        };
        valuations.insert(id, v);
    }
    Ok(Scene { dimension: n, bodies, densities, valuations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_scene() {
        let s = parse_scene_str(r#"{"dimension": 1, "bodies": {"K": [["0"], ["1"], ["1/2"]]}}"#).unwrap();
        assert_eq!(s.bodies["K"].vertices().len(), 2);
    }

    #[test]
    fn distinct_errors() {
        let dangling = r#"{"dimension": 1, "valuations": {"v": {"terms": [{"density": "F"}]}}}"#;
        assert_eq!(parse_scene_str(dangling).unwrap_err().kind(), "reference");
        let mixed = r#"{"dimension": 2, "bodies": {"A": [["0", "0"]], "B": [["0", "0", "0"]]}}"#;
        assert_eq!(parse_scene_str(mixed).unwrap_err().kind(), "dimension");
        let broken = "{\n\"dimension\": 1,\n\"bodies\": {\"K\":\n}";
        match parse_scene_str(broken).unwrap_err() {
            SceneError::Parse { line, .. } => assert_eq!(line, 4),
            e => panic!("unexpected {e:?}"),
        }
    }
}
