//! JSON network files.
//!
//! ```json
//! {
//!   "n": 2, "d": 1,
//!   "edges": [{"from": 1, "to": 2, "w": 1.0, "A": [[1.0]]}, ...],
//!   "demand": [0.5, 0.0],
//!   "x0": [1.0, 1.0],
//!   "label": ["north", "south"]
//! }
//! ```
//!
//! An edge `from i to j` says agent `i` imports from agent `j`: it fills
//! block `(i, j)` of the lifted matrix with `w·A`. Agents are 1-based, and
//! `demand` and `x0` list agent 1's industries first.

use mwio_core::{EconomyNetwork, Edge, Matrix, Vector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub n: usize,
    pub d: usize,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub demand: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub from: usize,
    pub to: usize,
    pub w: f64,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    /// Malformed JSON.
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// Missing or unknown fields, wrong types or wrong dimensions.
    #[error("{0}")]
    Schema(String),
    /// Well-formed but out-of-range numbers.
    #[error("{0}")]
    Value(String),
}

impl FormatError {
    pub fn name(&self) -> &'static str {
        match self {
            FormatError::Parse { .. } => "ParseError",
            FormatError::Schema(_) => "SchemaError",
            FormatError::Value(_) => "ValueError",
        }
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        use serde_json::error::Category;
        match e.classify() {
            Category::Syntax | Category::Eof | Category::Io => FormatError::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            },
            Category::Data => FormatError::Schema(e.to_string()),
        }
    }
}

pub fn parse_network(text: &str) -> Result<EconomyNetwork, FormatError> {
    let file: NetworkFile = serde_json::from_str(text)?;
    file.to_network()
}

pub fn serialize_network(net: &EconomyNetwork) -> String {
    let mut text = serde_json::to_string_pretty(&NetworkFile::from_network(net))
        .expect("finite numbers always serialize");
    text.push('\n');
    text
}

fn schema(msg: impl Into<String>) -> FormatError {
    FormatError::Schema(msg.into())
}

fn value(msg: impl Into<String>) -> FormatError {
    FormatError::Value(msg.into())
}

fn check_entries(what: &str, values: &[f64]) -> Result<(), FormatError> {
    match values.iter().position(|v| !(*v >= 0.0)) {
        Some(k) => Err(value(format!(
            "{what}: entry {} is {}, expected >= 0",
            k + 1,
            values[k]
        ))),
        None => Ok(()),
    }
}

fn state(what: &str, values: &Option<Vec<f64>>, dim: usize) -> Result<Option<Vector>, FormatError> {
    let Some(values) = values else {
        return Ok(None);
    };
    if values.len() != dim {
        return Err(schema(format!(
            "\"{what}\" has {} entries, expected n*d = {dim}",
            values.len()
        )));
    }
    check_entries(&format!("\"{what}\""), values)?;
    Ok(Some(
        Vector::new(values.clone()).map_err(|e| value(e.to_string()))?,
    ))
}

impl NetworkFile {
    pub fn to_network(&self) -> Result<EconomyNetwork, FormatError> {
        let (n, d) = (self.n, self.d);
        if n == 0 || d == 0 {
            return Err(schema(format!(
                "\"n\" and \"d\" must be positive, got n = {n}, d = {d}"
            )));
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for (k, e) in self.edges.iter().enumerate() {
            let at = format!("edges[{k}] (from {}, to {})", e.from, e.to);
            if !(1..=n).contains(&e.from) || !(1..=n).contains(&e.to) {
                return Err(schema(format!("{at}: agents must lie in 1..={n}")));
            }
            if edges
                .iter()
                .any(|x: &Edge| (x.importer, x.supplier) == (e.from - 1, e.to - 1))
            {
                return Err(schema(format!("{at}: duplicate edge")));
            }
            if e.a.len() != d {
                return Err(schema(format!(
                    "{at}: \"A\" has {} rows, expected {d}",
                    e.a.len()
                )));
            }
            if let Some((p, row)) = e.a.iter().enumerate().find(|(_, r)| r.len() != d) {
                return Err(schema(format!(
                    "{at}: row {} of \"A\" has {} entries, expected {d}",
                    p + 1,
                    row.len()
                )));
            }
            if !(0.0..=1.0).contains(&e.w) {
                return Err(value(format!("{at}: \"w\" = {} lies outside [0, 1]", e.w)));
            }
            let flat: Vec<f64> = e.a.concat();
            check_entries(&format!("{at}: \"A\""), &flat)?;
            if let Some(v) = flat.iter().find(|&&v| v > 1.0) {
                return Err(value(format!("{at}: \"A\" has coefficient {v} above 1")));
            }
            edges.push(Edge {
                importer: e.from - 1,
                supplier: e.to - 1,
                weight: e.w,
                matrix: Matrix::new(d, d, flat).map_err(|e| value(e.to_string()))?,
            });
        }
        let demand = state("demand", &self.demand, n * d)?;
        let x0 = state("x0", &self.x0, n * d)?;
        let mut net =
            EconomyNetwork::new(n, d, edges, demand, x0).map_err(|e| schema(e.to_string()))?;
        if let Some(labels) = &self.label {
            if labels.len() != n {
                return Err(schema(format!(
                    "\"label\" has {} entries, expected n = {n}",
                    labels.len()
                )));
            }
            net = net
                .with_labels(labels.clone())
                .map_err(|e| schema(e.to_string()))?;
        }
        Ok(net)
    }

    /// Demand is written only when nonzero; the initial state is always
    /// written.
    pub fn from_network(net: &EconomyNetwork) -> Self {
        let demand = net.demand();
        NetworkFile {
            n: net.agents(),
            d: net.industries(),
            edges: net
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    from: e.importer + 1,
                    to: e.supplier + 1,
                    w: e.weight,
                    a: e.matrix.to_rows(),
                })
                .collect(),
            demand: demand.iter().any(|&v| v != 0.0).then(|| demand.to_vec()),
            x0: Some(net.initial_state().to_vec()),
            label: net.labels().map(<[String]>::to_vec),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document() {
        let net =
            parse_network(r#"{"n":1,"d":1,"edges":[{"from":1,"to":1,"w":1,"A":[[1]]}]}"#).unwrap();
        let report = mwio_core::validate(&net, 1e-9).unwrap();
        assert_eq!(report.model_class, mwio_core::ModelClass::Closed);
    }

    #[test]
    fn wrong_matrix_size_names_the_edge() {
        let text = r#"{"n":2,"d":3,"edges":[
            {"from":1,"to":1,"w":1,"A":[[1,0,0],[0,1,0],[0,0,1]]},
            {"from":2,"to":1,"w":1,"A":[[1,0],[0,1]]}]}"#;
        let err = parse_network(text).unwrap_err();
        assert_eq!(err.name(), "SchemaError");
        assert!(err.to_string().contains("edges[1] (from 2, to 1)"), "{err}");
    }

    #[test]
    fn syntax_error_is_positioned() {
        let err = parse_network("{\"n\": 1,\n \"d\": }").unwrap_err();
        match err {
            FormatError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_and_missing_fields() {
        let extra = r#"{"n":1,"d":1,"edges":[],"colour":"red"}"#;
        assert_eq!(parse_network(extra).unwrap_err().name(), "SchemaError");
        let missing = r#"{"n":1,"edges":[]}"#;
        assert_eq!(parse_network(missing).unwrap_err().name(), "SchemaError");
        let edge_extra = r#"{"n":1,"d":1,"edges":[{"from":1,"to":1,"w":1,"A":[[1]],"B":0}]}"#;
        assert_eq!(parse_network(edge_extra).unwrap_err().name(), "SchemaError");
    }

    #[test]
    fn out_of_range_values() {
        let w = r#"{"n":1,"d":1,"edges":[{"from":1,"to":1,"w":1.5,"A":[[1]]}]}"#;
        assert_eq!(parse_network(w).unwrap_err().name(), "ValueError");
        let neg = r#"{"n":1,"d":1,"edges":[{"from":1,"to":1,"w":1,"A":[[-0.1]]}]}"#;
        assert_eq!(parse_network(neg).unwrap_err().name(), "ValueError");
        let y = r#"{"n":1,"d":1,"edges":[],"demand":[-1]}"#;
        assert_eq!(parse_network(y).unwrap_err().name(), "ValueError");
        let short = r#"{"n":2,"d":1,"edges":[],"x0":[1]}"#;
        assert_eq!(parse_network(short).unwrap_err().name(), "SchemaError");
        let agent = r#"{"n":1,"d":1,"edges":[{"from":2,"to":1,"w":1,"A":[[1]]}]}"#;
        assert_eq!(parse_network(agent).unwrap_err().name(), "SchemaError");
    }

    #[test]
    fn fixture_round_trip() {
        let net = mwio_core::fixtures::open_five_agent();
        let text = serialize_network(&net);
        assert_eq!(parse_network(&text).unwrap(), net);
    }
}
