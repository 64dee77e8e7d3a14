//! JSON interchange for graphs, quasi-isometry maps and cover families.
//!
//! Real parameters are read from their JSON text, so `0.1` becomes exactly
//! `1/10` under [`crate::Exact`]. Strings of the form `"p/q"` are accepted
//! too. On output, a value that does not survive the trip through a JSON
//! number is written as a string instead.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::andim::CoverFamily;
use crate::error::{Error, Result};
use crate::graph::{Color, ColoredGraph, Graph, VertexSet};
use crate::quasi_iso::QiMap;
use crate::scalar::Scalar;

/// `{"vertices": [..], "edges": [[u, v], ..], "colors": {v: c}}`, with
/// `colors` optional. Canonical output sorts vertices and writes each edge
/// smaller endpoint first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<BTreeMap<String, Color>>,
}

impl GraphJson {
    pub fn from_graph(g: &Graph) -> GraphJson {
        let mut vertices: Vec<String> = g.vertices().map(str::to_owned).collect();
        vertices.sort();
        let mut edges: Vec<[String; 2]> = g
            .edges()
            .into_iter()
            .map(|(u, v)| if u <= v { [u.to_owned(), v.to_owned()] } else { [v.to_owned(), u.to_owned()] })
            .collect();
        edges.sort();
        GraphJson {
            vertices,
            edges,
            colors: None,
        }
    }

    pub fn from_colored(cg: &ColoredGraph) -> GraphJson {
        GraphJson {
            colors: Some(cg.colors().map(|(v, c)| (v.to_owned(), c)).collect()),
            ..GraphJson::from_graph(cg.graph())
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        Graph::new(&self.vertices, self.edges.iter().map(|[u, v]| (u, v)))
    }

    /// The palette is the largest colour present.
    pub fn to_colored(&self) -> Result<ColoredGraph> {
        let colors = self
            .colors
            .as_ref()
            .ok_or_else(|| Error::Input("graph has no `colors` field".into()))?;
        let k = colors.values().copied().max().unwrap_or(1).max(1);
        ColoredGraph::new(self.to_graph()?, k, colors.clone())
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    parse_json::<GraphJson>(text, "graph")?.to_graph()
}

pub fn parse_colored_graph(text: &str) -> Result<ColoredGraph> {
    parse_json::<GraphJson>(text, "graph")?.to_colored()
}

#[derive(Deserialize)]
struct QiMapJson {
    f: BTreeMap<String, String>,
    c: Value,
}

/// Reads `{"f": {source: target}, "c": real}` for the given graphs.
pub fn parse_qi_map<S: Scalar>(source: Graph, target: Graph, text: &str) -> Result<QiMap<S>> {
    let wire: QiMapJson = parse_json(text, "map")?;
    QiMap::new(source, target, wire.f, real_from_json(&wire.c, "c")?)
}

pub fn qi_map_json<S: Scalar>(m: &QiMap<S>) -> Value {
    serde_json::json!({ "c": real_to_json(m.c), "f": m.f })
}

#[derive(Deserialize)]
struct CoverJson {
    n: usize,
    r: Value,
    bound: Value,
    collections: Vec<Vec<VertexSet>>,
}

/// Reads `{"n": int, "r": real, "bound": real, "collections": [[[v, ..], ..], ..]}`.
/// `n` must be one less than the number of collections.
pub fn parse_cover<S: Scalar>(text: &str) -> Result<CoverFamily<S>> {
    let wire: CoverJson = parse_json(text, "cover")?;
    if wire.n + 1 != wire.collections.len() {
        return Err(Error::Input(format!(
            "cover declares n = {} but has {} collections",
            wire.n,
            wire.collections.len()
        )));
    }
    CoverFamily::new(real_from_json(&wire.r, "r")?, real_from_json(&wire.bound, "bound")?, wire.collections)
}

pub fn cover_json<S: Scalar>(cf: &CoverFamily<S>) -> Value {
    serde_json::json!({
        "n": cf.n(),
        "r": real_to_json(cf.r),
        "bound": real_to_json(cf.bound),
        "collections": cf.collections,
    })
}

pub fn real_from_json<S: Scalar>(v: &Value, field: &str) -> Result<S> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(Error::Input(format!("`{field}` must be a number or \"p/q\", got {other}"))),
    };
    S::parse_real(&text).ok_or_else(|| Error::Input(format!("`{field}`: cannot read `{text}` as a real number")))
}

pub fn real_to_json<S: Scalar>(x: S) -> Value {
    let f = x.to_f64_lossy();
    match serde_json::Number::from_f64(f) {
        Some(n) if S::parse_real(&n.to_string()) == Some(x) => {
            if f.fract() == 0.0 && f.abs() < 9.0e15 {
                Value::from(f as i64)
            } else {
                Value::Number(n)
            }
        }
        _ => Value::String(x.to_string()),
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: format!("{what} JSON: {e}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Exact;

    #[test]
    fn canonical_graph_json() {
        let g = Graph::from_edges([("b", "a"), ("c", "b")]).unwrap();
        let text = serde_json::to_string(&GraphJson::from_graph(&g)).unwrap();
        assert_eq!(text, r#"{"vertices":["a","b","c"],"edges":[["a","b"],["b","c"]]}"#);
        assert_eq!(parse_graph(&text).unwrap(), g);
    }

    #[test]
    fn colored_round_trip() {
        let text = r#"{"vertices":["x","y"],"edges":[["x","y"]],"colors":{"x":1,"y":3}}"#;
        let cg = parse_colored_graph(text).unwrap();
        assert_eq!(cg.palette(), 3);
        assert_eq!(serde_json::to_string(&GraphJson::from_colored(&cg)).unwrap(), text);
        assert!(parse_colored_graph(r#"{"vertices":["x"],"edges":[]}"#).is_err());
    }

    #[test]
    fn bad_json_is_a_parse_error() {
        match parse_graph("{\"vertices\": [") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exact_constants() {
        let g = Graph::from_edges([("a", "b")]).unwrap();
        let m: QiMap<Exact> =
            parse_qi_map(g.clone(), g.clone(), r#"{"f":{"a":"a","b":"b"},"c":"7/3"}"#).unwrap();
        assert_eq!(m.c, Exact::new(7, 3));
        assert_eq!(qi_map_json(&m)["c"], Value::from("7/3"));
        let m: QiMap<Exact> = parse_qi_map(g.clone(), g, r#"{"f":{"a":"a","b":"b"},"c":0.1}"#).unwrap();
        assert_eq!(m.c, Exact::new(1, 10));
        assert_eq!(qi_map_json(&m)["c"], serde_json::json!(0.1));
    }

    #[test]
    fn cover_round_trip() {
        let text = r#"{"n":1,"r":2,"bound":4.5,"collections":[[["a"]],[["b","c"]]]}"#;
        let cf: CoverFamily<Exact> = parse_cover(text).unwrap();
        assert_eq!(cf.bound, Exact::new(9, 2));
        assert_eq!(cover_json(&cf), serde_json::from_str::<Value>(text).unwrap());
        assert!(parse_cover::<f64>(r#"{"n":2,"r":1,"bound":1,"collections":[[["a"]]]}"#).is_err());
    }
}
