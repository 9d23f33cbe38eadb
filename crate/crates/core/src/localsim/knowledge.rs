use std::collections::BTreeMap;

use crate::graph::{view, Edge, EdgeId, LabeledGraph, NodeId, NodeInput, View};

use super::NodeCtx;

/// Everything a node has heard: node records and full edge records, keyed
/// by global id.
#[derive(Clone, Debug)]
pub struct Knowledge<N, E> {
    pub nodes: BTreeMap<NodeId, (N, NodeInput)>,
    pub edges: BTreeMap<EdgeId, Edge<E>>,
    id_exponent: u32,
}

impl<N: Clone, E: Clone> Knowledge<N, E> {
    /// A node's own record and its incident edges.
    pub fn own(ctx: &NodeCtx<'_, N, E>) -> Self {
        let mut k = Knowledge { nodes: BTreeMap::new(), edges: BTreeMap::new(), id_exponent: ctx.id_exponent };
        k.nodes.insert(ctx.node, (ctx.label.clone(), ctx.input.clone()));
        for p in &ctx.ports {
            let (u, v, lu, lv) = if p.first {
                (ctx.node, p.neighbor, p.here, p.there)
            } else {
                (p.neighbor, ctx.node, p.there, p.here)
            };
            k.edges.insert(p.edge, Edge { u, v, lu: lu.clone(), lv: lv.clone() });
        }
        k
    }

    /// Returns whether anything new was learned.
    pub fn merge(&mut self, other: &Self) -> bool {
        let before = self.size();
        for (&v, r) in &other.nodes {
            self.nodes.entry(v).or_insert_with(|| r.clone());
        }
        for (&e, r) in &other.edges {
            self.edges.entry(e).or_insert_with(|| r.clone());
        }
        self.size() != before
    }

    pub fn size(&self) -> usize {
        self.nodes.len() + self.edges.len()
    }

    /// Rebuilds the radius-t view of `center` from known records, in
    /// global numbering. Matches `view(g, [center], t)` once every node
    /// within distance t has been heard from.
    pub fn view(&self, center: NodeId, t: usize) -> View<N, E> {
        let ids: Vec<NodeId> = self.nodes.keys().copied().collect();
        let mut g = LabeledGraph::new();
        g.set_id_exponent(self.id_exponent);
        for (l, v) in ids.iter().enumerate() {
            let (label, input) = &self.nodes[v];
            g.add_node(label.clone());
            *g.input_mut(l) = input.clone();
        }
        let local = |v: NodeId| ids.binary_search(&v).ok();
        let mut emap = Vec::new();
        for (&e, ed) in &self.edges {
            if let (Some(a), Some(b)) = (local(ed.u), local(ed.v)) {
                g.add_edge(a, b, ed.lu.clone(), ed.lv.clone());
                emap.push(e);
            }
        }
        let c = local(center).expect("a node knows itself");
        let mut w = view(&g, &[c], t);
        w.centers = vec![center];
        w.nodes = w.nodes.iter().map(|&l| ids[l]).collect();
        w.edge_map = w.edge_map.iter().map(|&l| emap[l]).collect();
        w
    }
}
