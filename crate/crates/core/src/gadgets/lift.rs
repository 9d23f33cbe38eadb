use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::octopus::{append_octopus, OctopusLayout, OctopusSpec};
use super::proper::check_proper;
use super::tree::tree_coordinates;
use super::{EdgeClasses, EdgeLabel, Instance, NodeKind};
use crate::graph::{components, LabeledGraph, NodeId, Scope};

/// A bipartite multigraph with an edge ordering σ_w at every white node.
/// `order[w][p]` is the edge at position p + 1 of σ_w.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteInstance {
    pub whites: usize,
    pub blacks: usize,
    /// (white, black) pairs; parallel edges allowed.
    pub edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub order: Vec<Vec<usize>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LiftError {
    #[error("white node {0} has degree 0")]
    IsolatedWhite(usize),
    #[error("black node {0} has degree 0")]
    IsolatedBlack(usize),
    #[error("edge {0} references a missing node")]
    BadEdge(usize),
    #[error("ordering of white node {0} is not a bijection onto its edges")]
    BadOrder(usize),
    #[error("port height must be at least 1")]
    ZeroHeight,
    #[error("input is not a proper instance ({0} violations)")]
    NotProper(usize),
    #[error("port gadget rooted at {0} has {1} pi_link half-edges")]
    AmbiguousPort(NodeId, usize),
    #[error("malformed proper instance: {0}")]
    Malformed(String),
}

impl BipartiteInstance {
    /// Builds an instance with σ_w following edge-index order.
    pub fn new(whites: usize, blacks: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut b = BipartiteInstance { whites, blacks, edges, order: Vec::new() };
        b.fill_default_order();
        b
    }

    pub fn fill_default_order(&mut self) {
        if self.order.is_empty() {
            let mut order = vec![Vec::new(); self.whites];
            for (e, &(w, _)) in self.edges.iter().enumerate() {
                if w < self.whites {
                    order[w].push(e);
                }
            }
            self.order = order;
        }
    }

    pub fn white_degree(&self, w: usize) -> usize {
        self.edges.iter().filter(|&&(x, _)| x == w).count()
    }

    /// Edges at black `b`, in edge-index order.
    pub fn black_edges(&self, b: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].1 == b).collect()
    }

    /// Position (1-based) of every edge in its white node's ordering.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.edges.len()];
        for o in &self.order {
            for (p, &e) in o.iter().enumerate() {
                pos[e] = p + 1;
            }
        }
        pos
    }

    pub fn validate(&self) -> Result<(), LiftError> {
        let mut wdeg = vec![0usize; self.whites];
        let mut bdeg = vec![0usize; self.blacks];
        for (e, &(w, b)) in self.edges.iter().enumerate() {
            if w >= self.whites || b >= self.blacks {
                return Err(LiftError::BadEdge(e));
            }
            wdeg[w] += 1;
            bdeg[b] += 1;
        }
        if let Some(w) = wdeg.iter().position(|&d| d == 0) {
            return Err(LiftError::IsolatedWhite(w));
        }
        if let Some(b) = bdeg.iter().position(|&d| d == 0) {
            return Err(LiftError::IsolatedBlack(b));
        }
        if self.order.len() != self.whites {
            return Err(LiftError::BadOrder(self.order.len().min(self.whites)));
        }
        let mut seen = vec![false; self.edges.len()];
        for (w, o) in self.order.iter().enumerate() {
            if o.len() != wdeg[w] {
                return Err(LiftError::BadOrder(w));
            }
            for &e in o {
                if e >= self.edges.len() || self.edges[e].0 != w || seen[e] {
                    return Err(LiftError::BadOrder(w));
                }
                seen[e] = true;
            }
        }
        Ok(())
    }

    /// The black endpoints of each white node's edges in σ order. Two
    /// instances with equal signatures are isomorphic preserving σ.
    pub fn signature(&self) -> (usize, usize, Vec<Vec<usize>>) {
        let sig = self.order.iter().map(|o| o.iter().map(|&e| self.edges[e].1).collect()).collect();
        (self.whites, self.blacks, sig)
    }

    /// Random instance: every black has degree 3, white degrees lie in
    /// 1..=max_white_deg, σ_w is a random permutation. Parallel edges can
    /// occur. With `max_white_deg == 1` the white count must be a multiple
    /// of 3.
    pub fn random<R: Rng>(whites: usize, max_white_deg: usize, rng: &mut R) -> Self {
        assert!(whites >= 1 && max_white_deg >= 1);
        assert!(whites * max_white_deg >= 3, "not enough stubs for one black node");
        assert!(max_white_deg > 1 || whites % 3 == 0, "degree-1 whites must come in multiples of 3");
        let mut deg: Vec<usize> = (0..whites).map(|_| rng.gen_range(1..=max_white_deg)).collect();
        let mut total: usize = deg.iter().sum();
        while total % 3 != 0 || total < 3 {
            let w = rng.gen_range(0..whites);
            let up = total < 3 || rng.gen_bool(0.5);
            if up && deg[w] < max_white_deg {
                deg[w] += 1;
                total += 1;
            } else if !up && deg[w] > 1 {
                deg[w] -= 1;
                total -= 1;
            }
        }
        let mut stubs: Vec<usize> = deg.iter().enumerate().flat_map(|(w, &d)| std::iter::repeat(w).take(d)).collect();
        stubs.shuffle(rng);
        let edges: Vec<(usize, usize)> = stubs.iter().enumerate().map(|(i, &w)| (w, i / 3)).collect();
        let mut b = BipartiteInstance::new(whites, total / 3, edges);
        for o in &mut b.order {
            o.shuffle(rng);
        }
        b
    }
}

/// Which part of the bipartite graph a lift node stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Comp {
    White(usize),
    Black(usize),
    Edge(usize),
}

#[derive(Clone, Debug)]
pub struct LiftResult {
    pub graph: Instance,
    pub comp: Vec<Comp>,
    /// Octopus layout per white node; its ports follow σ_w.
    pub octopi: Vec<OctopusLayout>,
    /// Inter-octopus node per black node.
    pub inter: Vec<NodeId>,
    /// Port gadget root per bipartite edge.
    pub port_root: Vec<NodeId>,
}

/// Head height and canonical η for a white node of degree `deg`.
pub fn head_params(deg: usize) -> (u32, Vec<u8>) {
    assert!(deg >= 1);
    let x = deg.ilog2() + 1;
    let leaves = 1usize << (x - 1);
    let twos = deg - leaves;
    let eta = (0..leaves).map(|i| if i < twos { 2 } else { 1 }).collect();
    (x, eta)
}

/// Edge-order-preserving lift with every port gadget of height `h`.
pub fn lift(b: &BipartiteInstance, h: u32) -> Result<LiftResult, LiftError> {
    if h == 0 {
        return Err(LiftError::ZeroHeight);
    }
    let mut b = b.clone();
    b.fill_default_order();
    b.validate()?;
    let mut g: Instance = LabeledGraph::new();
    let mut comp = Vec::new();
    let mut octopi = Vec::new();
    let mut port_root = vec![usize::MAX; b.edges.len()];
    let mut leftmost = vec![usize::MAX; b.edges.len()];
    for w in 0..b.whites {
        let (x, eta) = head_params(b.order[w].len());
        let spec = OctopusSpec::uniform(x, eta, h);
        let lay = append_octopus(&mut g, &spec);
        comp.resize(g.n(), Comp::White(w));
        for &v in &lay.head_nodes {
            comp[v] = Comp::White(w);
        }
        for (p, port) in lay.ports.iter().enumerate() {
            let e = b.order[w][p];
            for &v in &port.nodes {
                comp[v] = Comp::Edge(e);
            }
            port_root[e] = port.root;
            leftmost[e] = port.leftmost_leaf;
        }
        octopi.push(lay);
    }
    let mut inter = Vec::with_capacity(b.blacks);
    for bl in 0..b.blacks {
        let v = g.add_node(NodeKind::Inter);
        comp.push(Comp::Black(bl));
        inter.push(v);
    }
    for (e, &(_, bl)) in b.edges.iter().enumerate() {
        g.add_edge(leftmost[e], inter[bl], EdgeLabel::Pi, EdgeLabel::Ip);
    }
    Ok(LiftResult { graph: g, comp, octopi, inter, port_root })
}

/// Contracts a proper instance back to its bipartite graph. Whites are
/// numbered by the smallest node of their head gadget, blacks by node id,
/// edges by port root.
pub fn compress(l: &Instance) -> Result<(BipartiteInstance, Vec<Comp>), LiftError> {
    let bad = check_proper(l);
    if !bad.is_empty() {
        return Err(LiftError::NotProper(bad.len()));
    }
    let classes = EdgeClasses::new(l);
    let heads: Vec<bool> = l.nodes().map(|v| *l.label(v) == NodeKind::Head).collect();
    let ports: Vec<bool> = l.nodes().map(|v| *l.label(v) == NodeKind::Port).collect();
    let (hc, nh) = components(l, Scope { nodes: Some(&heads), edges: Some(&classes.intra_internal) });
    let (pc, _) = components(l, Scope { nodes: Some(&ports), edges: Some(&classes.intra_internal) });

    let mut head_root = vec![usize::MAX; nh];
    for v in l.nodes() {
        if heads[v] && !l.half_edges(v).any(|h| *h.here == EdgeLabel::P) {
            head_root[hc[v]] = v;
        }
    }
    if let Some(c) = head_root.iter().position(|&r| r == usize::MAX) {
        return Err(LiftError::Malformed(format!("head gadget {c} has no root")));
    }
    let tree_scope = Scope::edges(&classes.intra_internal);
    let mut head_coord = vec![None; l.n()];
    for &r in &head_root {
        for (v, c) in tree_coordinates(l, r, tree_scope).into_iter().enumerate() {
            if c.is_some() {
                head_coord[v] = c;
            }
        }
    }

    let mut comp = vec![Comp::White(0); l.n()];
    for v in l.nodes() {
        if heads[v] {
            comp[v] = Comp::White(hc[v]);
        }
    }
    let mut black_of = vec![usize::MAX; l.n()];
    let mut blacks = 0;
    for v in l.nodes() {
        if *l.label(v) == NodeKind::Inter {
            black_of[v] = blacks;
            comp[v] = Comp::Black(blacks);
            blacks += 1;
        }
    }

    // One edge per port root, in node order.
    let mut edges = Vec::new();
    let mut keyed: Vec<Vec<((u64, u8), usize)>> = vec![Vec::new(); nh];
    let mut edge_of_port = vec![usize::MAX; l.n()];
    for v in l.nodes() {
        if !ports[v] {
            continue;
        }
        let Some(ph) = l.half_edges(v).find(|h| *h.here == EdgeLabel::Ph) else { continue };
        let leaf = ph.other;
        let j = if *ph.there == EdgeLabel::Hp1 { 1 } else { 2 };
        let (_, k) = head_coord[leaf].ok_or_else(|| LiftError::Malformed(format!("head leaf {leaf} unreachable")))?;
        let e = edges.len();
        edge_of_port[pc[v]] = e;
        edges.push((hc[leaf], usize::MAX));
        keyed[hc[leaf]].push(((k, j), e));
    }
    let mut pi_count = vec![0usize; edges.len()];
    for v in l.nodes() {
        if !ports[v] {
            continue;
        }
        let e = edge_of_port[pc[v]];
        if e == usize::MAX {
            return Err(LiftError::Malformed(format!("port node {v} has no port root")));
        }
        comp[v] = Comp::Edge(e);
        for h in l.half_edges(v) {
            if *h.here == EdgeLabel::Pi {
                pi_count[e] += 1;
                edges[e].1 = black_of[h.other];
            }
        }
    }
    for (e, &c) in pi_count.iter().enumerate() {
        if c != 1 {
            let root = l.nodes().find(|&v| ports[v] && comp[v] == Comp::Edge(e)).unwrap_or(0);
            return Err(LiftError::AmbiguousPort(root, c));
        }
    }
    let order = keyed
        .into_iter()
        .map(|mut ks| {
            ks.sort();
            ks.into_iter().map(|(_, e)| e).collect()
        })
        .collect();
    let b = BipartiteInstance { whites: nh, blacks, edges, order };
    b.validate()?;
    Ok((b, comp))
}
