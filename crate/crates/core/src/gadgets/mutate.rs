use serde::{Deserialize, Serialize};

use super::{EdgeLabel, Instance, NodeKind};
use crate::graph::{EdgeId, NodeId};

/// Gadget family. Mutations flip half-edges to any label of E^proper and,
/// outside bare trees, nodes to any node kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Tree,
    Octopus,
    Proper,
}

impl Family {
    pub fn edge_labels(self) -> &'static [EdgeLabel] {
        match self {
            Family::Tree => &EdgeLabel::TREE,
            Family::Octopus => &EdgeLabel::OCTOPUS,
            Family::Proper => &EdgeLabel::PROPER,
        }
    }

    pub fn node_labels(self) -> &'static [NodeKind] {
        match self {
            Family::Tree => &[],
            Family::Octopus => &NodeKind::OCTOPUS,
            Family::Proper => &NodeKind::PROPER,
        }
    }
}

/// A single-point perturbation of a labeled graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mutation {
    DeleteEdge(EdgeId),
    FlipHalf { edge: EdgeId, at: NodeId, to: EdgeLabel },
    FlipNode { node: NodeId, to: NodeKind },
}

/// Every single mutation of `g` within the family's alphabets.
pub fn enumerate_mutations(g: &Instance, family: Family) -> Vec<Mutation> {
    let mut out = Vec::new();
    for (e, ed) in g.edges().iter().enumerate() {
        out.push(Mutation::DeleteEdge(e));
        for (at, cur) in [(ed.u, ed.lu), (ed.v, ed.lv)] {
            for &to in &EdgeLabel::PROPER {
                if to != cur {
                    out.push(Mutation::FlipHalf { edge: e, at, to });
                }
            }
        }
    }
    for v in g.nodes() {
        if family == Family::Tree {
            break;
        }
        for to in NodeKind::ALL {
            if to != *g.label(v) {
                out.push(Mutation::FlipNode { node: v, to });
            }
        }
    }
    out
}

pub fn apply_mutation(g: &Instance, m: Mutation) -> Instance {
    match m {
        Mutation::DeleteEdge(e) => g.without_edge(e),
        Mutation::FlipHalf { edge, at, to } => {
            let mut h = g.clone();
            h.set_half_label(edge, at, to);
            h
        }
        Mutation::FlipNode { node, to } => {
            let mut h = g.clone();
            h.set_label(node, to);
            h
        }
    }
}

impl Mutation {
    /// Nodes whose incident structure or label the mutation touches.
    pub fn touched(&self, g: &Instance) -> Vec<NodeId> {
        match *self {
            Mutation::DeleteEdge(e) | Mutation::FlipHalf { edge: e, .. } => {
                vec![g.edge(e).u, g.edge(e).v]
            }
            Mutation::FlipNode { node, .. } => vec![node],
        }
    }
}
