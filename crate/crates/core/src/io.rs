//! JSON formats for graphs and automata.
//!
//! Graph document:
//! `{"vertices": n | ["name", ...], "edges": [{"src": v, "dst": v, "weight": "1.5"}, ...],
//!   "quota": [...], "portfolio": [...]}`
//! where `v` is an index or a vertex name, `weight` (string or number) is
//! optional and defaults to 1, and `quota`/`portfolio` are optional. File
//! order of `edges` defines edge ids.
//!
//! DFA document:
//! `{"alphabet": ["a", ...], "states": ["A", ...], "initial": "A",
//!   "accepts": ["A", ...], "delta": [["A", "B"], ...]}`
//! with one `delta` row per state in symbol order. States may be given by
//! name or index.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::graph::{format_weight, int_weight, parse_weight, MultiGraph, QuotaSpec, WeightMap};

#[derive(Deserialize)]
#[serde(untagged)]
enum Vertices {
    Count(usize),
    Names(Vec<String>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Ref {
    Index(usize),
    Name(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    src: Ref,
    dst: Ref,
    #[serde(default)]
    weight: Option<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    vertices: Vertices,
    edges: Vec<RawEdge>,
    #[serde(default)]
    quota: Option<Vec<usize>>,
    #[serde(default)]
    portfolio: Option<Vec<usize>>,
}

/// Contents of a graph document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: MultiGraph,
    /// `None` when no edge carried a weight.
    pub weights: Option<WeightMap>,
    pub quota: Option<Vec<usize>>,
    pub portfolio: Option<Vec<usize>>,
}

impl GraphFile {
    pub fn new(graph: MultiGraph) -> Self {
        GraphFile {
            graph,
            weights: None,
            quota: None,
            portfolio: None,
        }
    }

    /// Given weights, or weight 1 on every edge.
    pub fn weights_or_unit(&self) -> WeightMap {
        self.weights
            .clone()
            .unwrap_or_else(|| WeightMap::uniform(&self.graph, int_weight(1)))
    }

    /// The stored quota and portfolio; a missing portfolio means none.
    pub fn spec(&self) -> Result<QuotaSpec> {
        let n = self.graph.vertex_count();
        let q = self
            .quota
            .clone()
            .ok_or_else(|| Error::Parse("document has no quota".into()))?;
        let s = self.portfolio.clone().unwrap_or_else(|| vec![0; n]);
        QuotaSpec::new(&self.graph, q, s)
    }
}

fn resolve(r: &Ref, names: &HashMap<&str, usize>, n: usize, at: &str) -> Result<usize> {
    match r {
        Ref::Index(i) if *i < n => Ok(*i),
        Ref::Index(i) => Err(Error::Parse(format!("{at}: vertex {i} out of range (have {n})"))),
        Ref::Name(s) => names
            .get(s.as_str())
            .copied()
            .ok_or_else(|| Error::Parse(format!("{at}: unknown vertex {s:?}"))),
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let raw: RawGraph = serde_json::from_str(text).map_err(json_error)?;
    let (n, names) = match raw.vertices {
        Vertices::Count(n) => (n, None),
        Vertices::Names(v) => {
            if v.iter().collect::<BTreeSet<_>>().len() != v.len() {
                return Err(Error::Parse("vertices: repeated name".into()));
            }
            (v.len(), Some(v))
        }
    };
    let index: HashMap<&str, usize> = names
        .iter()
        .flatten()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let mut pairs = Vec::with_capacity(raw.edges.len());
    let mut weights = Vec::with_capacity(raw.edges.len());
    let mut any_weight = false;
    for (k, e) in raw.edges.iter().enumerate() {
        let src = resolve(&e.src, &index, n, &format!("edges[{k}].src"))?;
        let dst = resolve(&e.dst, &index, n, &format!("edges[{k}].dst"))?;
        pairs.push((src, dst));
        let w = match &e.weight {
            None => int_weight(1),
            Some(v) => {
                any_weight = true;
                let text = match v {
                    Value::String(s) => s.clone(),
                    Value::Number(x) => x.to_string(),
                    other => return Err(Error::Parse(format!("edges[{k}].weight: expected a number, got {other}"))),
                };
                parse_weight(&text).map_err(|e| Error::Parse(format!("edges[{k}].weight: {e}")))?
            }
        };
        weights.push(w);
    }
    let mut graph = MultiGraph::new(n, pairs)?;
    if let Some(v) = names {
        graph = graph.with_names(v)?;
    }
    let weights = if any_weight {
        Some(WeightMap::new(&graph, weights)?)
    } else {
        None
    };
    for (what, v) in [("quota", &raw.quota), ("portfolio", &raw.portfolio)] {
        if let Some(v) = v {
            if v.len() != n {
                return Err(Error::Parse(format!("{what}: expected {n} entries, got {}", v.len())));
            }
        }
    }
    Ok(GraphFile {
        graph,
        weights,
        quota: raw.quota,
        portfolio: raw.portfolio,
    })
}

#[derive(Serialize)]
#[serde(untagged)]
enum VerticesOut<'a> {
    Count(usize),
    Names(&'a [String]),
}

#[derive(Serialize)]
struct EdgeOut<'a> {
    src: &'a Value,
    dst: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight: Option<String>,
}

#[derive(Serialize)]
struct GraphOut<'a> {
    vertices: VerticesOut<'a>,
    edges: Vec<EdgeOut<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quota: &'a Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    portfolio: &'a Option<Vec<usize>>,
}

/// Pretty-printed graph document; vertices are written by name when the
/// graph has names.
pub fn write_graph(file: &GraphFile) -> String {
    let g = &file.graph;
    let labels: Vec<Value> = (0..g.vertex_count())
        .map(|v| match g.names() {
            Some(names) => Value::String(names[v].clone()),
            None => Value::from(v),
        })
        .collect();
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .map(|(k, e)| EdgeOut {
            src: &labels[e.src],
            dst: &labels[e.dst],
            weight: file.weights.as_ref().map(|w| format_weight(w.get(k))),
        })
        .collect();
    let out = GraphOut {
        vertices: match g.names() {
            Some(names) => VerticesOut::Names(names),
            None => VerticesOut::Count(g.vertex_count()),
        },
        edges,
        quota: &file.quota,
        portfolio: &file.portfolio,
    };
    serde_json::to_string_pretty(&out).expect("graph serializes")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDfa {
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: Ref,
    accepts: Vec<Ref>,
    delta: Vec<Vec<Ref>>,
}

pub fn parse_dfa(text: &str) -> Result<Dfa> {
    let raw: RawDfa = serde_json::from_str(text).map_err(json_error)?;
    let n = raw.states.len();
    let index: HashMap<&str, usize> = raw.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    if index.len() != n {
        return Err(Error::Parse("states: repeated name".into()));
    }
    let initial = resolve(&raw.initial, &index, n, "initial")?;
    let accepts = raw
        .accepts
        .iter()
        .enumerate()
        .map(|(i, r)| resolve(r, &index, n, &format!("accepts[{i}]")))
        .collect::<Result<BTreeSet<_>>>()?;
    let delta = raw
        .delta
        .iter()
        .enumerate()
        .map(|(s, row)| {
            row.iter()
                .enumerate()
                .map(|(a, r)| resolve(r, &index, n, &format!("delta[{s}][{a}]")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Dfa::new(raw.alphabet, raw.states, initial, accepts, delta).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Serialize)]
struct DfaOut<'a> {
    alphabet: &'a [String],
    states: &'a [String],
    initial: &'a str,
    accepts: Vec<&'a str>,
    delta: Vec<Vec<&'a str>>,
}

/// Pretty-printed DFA document with states written by name.
pub fn write_dfa(d: &Dfa) -> String {
    let name = |s: usize| d.state_names()[s].as_str();
    let out = DfaOut {
        alphabet: d.alphabet(),
        states: d.state_names(),
        initial: name(d.initial()),
        accepts: d.accepts().iter().map(|&s| name(s)).collect(),
        delta: d.delta().iter().map(|row| row.iter().map(|&t| name(t)).collect()).collect(),
    };
    serde_json::to_string_pretty(&out).expect("dfa serializes")
}
