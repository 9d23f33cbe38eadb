use std::fmt::{Display, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{GraphError, LabeledGraph, NodeInput};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NodeJson<N> {
    pub id: usize,
    pub label: N,
    #[serde(default)]
    pub input: NodeInput,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeJson<E> {
    pub u: usize,
    pub v: usize,
    pub lu: E,
    pub lv: E,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson<N, E> {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id_exponent: Option<u32>,
    pub nodes: Vec<NodeJson<N>>,
    pub edges: Vec<EdgeJson<E>>,
}

pub fn to_json<N: Serialize + Clone, E: Serialize + Clone>(
    g: &LabeledGraph<N, E>,
) -> GraphJson<N, E> {
    GraphJson {
        n: g.n(),
        id_exponent: Some(g.id_exponent()),
        nodes: g
            .nodes()
            .map(|v| NodeJson { id: v, label: g.label(v).clone(), input: g.input(v).clone() })
            .collect(),
        edges: g
            .edges()
            .iter()
            .map(|e| EdgeJson { u: e.u, v: e.v, lu: e.lu.clone(), lv: e.lv.clone() })
            .collect(),
    }
}

/// Builds a graph from its JSON form. Node ids must be exactly `0..n`;
/// a missing identifier defaults to `id + 1`.
pub fn from_json<N: DeserializeOwned, E: DeserializeOwned>(
    doc: GraphJson<N, E>,
) -> Result<LabeledGraph<N, E>, GraphError> {
    if doc.nodes.len() != doc.n {
        return Err(GraphError::Malformed(format!(
            "n = {} but {} nodes listed",
            doc.n,
            doc.nodes.len()
        )));
    }
    let mut slots: Vec<Option<NodeJson<N>>> = (0..doc.n).map(|_| None).collect();
    for node in doc.nodes {
        if node.id >= doc.n {
            return Err(GraphError::NodeOutOfRange(node.id));
        }
        let id = node.id;
        if slots[id].replace(node).is_some() {
            return Err(GraphError::Malformed(format!("node {id} listed twice")));
        }
    }
    let mut g = LabeledGraph::new();
    if let Some(c) = doc.id_exponent {
        if c == 0 {
            return Err(GraphError::Malformed("id_exponent must be >= 1".into()));
        }
        g.set_id_exponent(c);
    }
    for slot in slots {
        let node = slot.expect("all ids present");
        let v = g.add_node(node.label);
        let mut input = node.input;
        if input.ident == 0 {
            input.ident = v as u64 + 1;
        }
        *g.input_mut(v) = input;
    }
    for e in doc.edges {
        for x in [e.u, e.v] {
            if x >= g.n() {
                return Err(GraphError::NodeOutOfRange(x));
            }
        }
        if e.u == e.v {
            return Err(GraphError::SelfLoop(e.u));
        }
        g.add_edge(e.u, e.v, e.lu, e.lv);
    }
    g.validate_identifiers()?;
    Ok(g)
}

/// DOT export; half-edge labels become tail/head annotations.
pub fn to_dot<N: Display, E: Display>(g: &LabeledGraph<N, E>, name: &str) -> String {
    let mut s = String::new();
    writeln!(s, "graph {name} {{").unwrap();
    for v in g.nodes() {
        writeln!(s, "  n{v} [label=\"{v}:{}\"];", g.label(v)).unwrap();
    }
    for e in g.edges() {
        writeln!(
            s,
            "  n{} -- n{} [taillabel=\"{}\", headlabel=\"{}\"];",
            e.u, e.v, e.lu, e.lv
        )
        .unwrap();
    }
    s.push_str("}\n");
    s
}
