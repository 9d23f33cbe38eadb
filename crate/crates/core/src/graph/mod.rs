//! Labeled graphs with per-half-edge labels, distances, views and labeled
//! path following.

mod io;

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use io::{from_json, to_dot, to_json, GraphJson};

pub type NodeId = usize;
pub type EdgeId = usize;

/// Identifier exponent used when none is configured: identifiers live in `[n^2]`.
pub const DEFAULT_ID_EXPONENT: u32 = 2;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("node set must be nonempty")]
    EmptySet,
    #[error("node {0} out of range")]
    NodeOutOfRange(NodeId),
    #[error("identifier {0} used twice")]
    DuplicateIdentifier(u64),
    #[error("identifier {ident} outside [1, {bound}]")]
    IdentifierOutOfRange { ident: u64, bound: u64 },
    #[error("parallel edge between {0} and {1} in a simple-graph context")]
    ParallelEdge(NodeId, NodeId),
    #[error("self loop at {0}")]
    SelfLoop(NodeId),
    #[error("malformed instance: {0}")]
    Malformed(String),
}

/// The local input record x(v). Port numbers are implicit in the order of
/// the node's incidence list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeInput {
    pub ident: u64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub mark: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge<E> {
    pub u: NodeId,
    pub v: NodeId,
    pub lu: E,
    pub lv: E,
}

impl<E> Edge<E> {
    pub fn other(&self, x: NodeId) -> NodeId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    /// Label of the half-edge at `x` and at the opposite endpoint.
    pub fn labels_from(&self, x: NodeId) -> (&E, &E) {
        if self.u == x {
            (&self.lu, &self.lv)
        } else {
            (&self.lv, &self.lu)
        }
    }
}

/// One incident half-edge seen from its owner.
#[derive(Clone, Copy, Debug)]
pub struct HalfEdge<'a, E> {
    pub edge: EdgeId,
    pub port: usize,
    pub other: NodeId,
    pub here: &'a E,
    pub there: &'a E,
}

/// Restriction of a graph to a node subset and/or an edge subset.
#[derive(Clone, Copy, Debug, Default)]
pub struct Scope<'a> {
    pub nodes: Option<&'a [bool]>,
    pub edges: Option<&'a [bool]>,
}

impl<'a> Scope<'a> {
    pub const FULL: Scope<'static> = Scope { nodes: None, edges: None };

    pub fn nodes(mask: &'a [bool]) -> Self {
        Scope { nodes: Some(mask), edges: None }
    }

    pub fn edges(mask: &'a [bool]) -> Self {
        Scope { nodes: None, edges: Some(mask) }
    }

    #[inline]
    pub fn has_node(&self, v: NodeId) -> bool {
        self.nodes.map_or(true, |m| m[v])
    }

    #[inline]
    pub fn has_edge(&self, e: EdgeId) -> bool {
        self.edges.map_or(true, |m| m[e])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledGraph<N, E> {
    labels: Vec<N>,
    inputs: Vec<NodeInput>,
    edges: Vec<Edge<E>>,
    adj: Vec<Vec<EdgeId>>,
    id_exponent: u32,
}

impl<N, E> Default for LabeledGraph<N, E> {
    fn default() -> Self {
        LabeledGraph {
            labels: Vec::new(),
            inputs: Vec::new(),
            edges: Vec::new(),
            adj: Vec::new(),
            id_exponent: DEFAULT_ID_EXPONENT,
        }
    }
}

impl<N, E> LabeledGraph<N, E> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a node whose identifier defaults to its dense index plus one.
    pub fn add_node(&mut self, label: N) -> NodeId {
        let v = self.labels.len();
        self.labels.push(label);
        self.inputs.push(NodeInput { ident: v as u64 + 1, ..NodeInput::default() });
        self.adj.push(Vec::new());
        v
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId, lu: E, lv: E) -> EdgeId {
        assert!(u < self.n() && v < self.n(), "edge endpoint out of range");
        assert!(u != v, "self loops are not supported");
        let e = self.edges.len();
        self.edges.push(Edge { u, v, lu, lv });
        self.adj[u].push(e);
        self.adj[v].push(e);
        e
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.n()
    }

    pub fn label(&self, v: NodeId) -> &N {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[N] {
        &self.labels
    }

    pub fn set_label(&mut self, v: NodeId, label: N) {
        self.labels[v] = label;
    }

    pub fn input(&self, v: NodeId) -> &NodeInput {
        &self.inputs[v]
    }

    pub fn input_mut(&mut self, v: NodeId) -> &mut NodeInput {
        &mut self.inputs[v]
    }

    pub fn ident(&self, v: NodeId) -> u64 {
        self.inputs[v].ident
    }

    pub fn id_exponent(&self) -> u32 {
        self.id_exponent
    }

    pub fn set_id_exponent(&mut self, c: u32) {
        assert!(c >= 1);
        self.id_exponent = c;
    }

    pub fn edge(&self, e: EdgeId) -> &Edge<E> {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge<E>] {
        &self.edges
    }

    /// Incident edge ids; position in the slice is the port number.
    pub fn incident(&self, v: NodeId) -> &[EdgeId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn half_edges(&self, v: NodeId) -> impl Iterator<Item = HalfEdge<'_, E>> + '_ {
        self.adj[v].iter().enumerate().map(move |(port, &e)| {
            let edge = &self.edges[e];
            let (here, there) = edge.labels_from(v);
            HalfEdge { edge: e, port, other: edge.other(v), here, there }
        })
    }

    pub fn half_edges_in<'s>(
        &'s self,
        v: NodeId,
        scope: Scope<'s>,
    ) -> impl Iterator<Item = HalfEdge<'s, E>> + 's {
        self.half_edges(v)
            .filter(move |h| scope.has_edge(h.edge) && scope.has_node(h.other))
    }

    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adj[v].iter().map(move |&e| self.edges[e].other(v))
    }

    pub fn half_label(&self, e: EdgeId, at: NodeId) -> &E {
        self.edges[e].labels_from(at).0
    }

    pub fn set_half_label(&mut self, e: EdgeId, at: NodeId, label: E) {
        let edge = &mut self.edges[e];
        if edge.u == at {
            edge.lu = label;
        } else {
            assert_eq!(edge.v, at, "node is not an endpoint of the edge");
            edge.lv = label;
        }
    }

    pub fn has_parallel_edges(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges.iter().any(|e| !seen.insert((e.u.min(e.v), e.u.max(e.v))))
    }

    pub fn assert_simple(&self) -> Result<(), GraphError> {
        let mut seen = std::collections::HashSet::new();
        for e in &self.edges {
            if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
                return Err(GraphError::ParallelEdge(e.u, e.v));
            }
        }
        Ok(())
    }

    /// Upper end of the identifier space `[n^c]`.
    pub fn ident_bound(&self) -> u64 {
        (self.n().max(1) as u64).saturating_pow(self.id_exponent)
    }

    pub fn validate_identifiers(&self) -> Result<(), GraphError> {
        let bound = self.ident_bound();
        let mut seen = std::collections::HashSet::new();
        for inp in &self.inputs {
            if inp.ident == 0 || inp.ident > bound {
                return Err(GraphError::IdentifierOutOfRange { ident: inp.ident, bound });
            }
            if !seen.insert(inp.ident) {
                return Err(GraphError::DuplicateIdentifier(inp.ident));
            }
        }
        Ok(())
    }

    /// Draws distinct identifiers uniformly from `[n^c]`.
    pub fn randomize_identifiers<R: Rng>(&mut self, rng: &mut R) {
        let bound = self.ident_bound();
        let n = self.n();
        if (bound as usize) <= 4 * n {
            let mut pool: Vec<u64> = (1..=bound).collect();
            pool.shuffle(rng);
            for (inp, id) in self.inputs.iter_mut().zip(pool) {
                inp.ident = id;
            }
            return;
        }
        let mut seen = std::collections::HashSet::new();
        for inp in &mut self.inputs {
            loop {
                let id = rng.gen_range(1..=bound);
                if seen.insert(id) {
                    inp.ident = id;
                    break;
                }
            }
        }
    }

    pub fn map_labels<N2, E2>(
        &self,
        mut fnode: impl FnMut(NodeId, &N) -> N2,
        mut fedge: impl FnMut(&E) -> E2,
    ) -> LabeledGraph<N2, E2> {
        LabeledGraph {
            labels: self.labels.iter().enumerate().map(|(v, l)| fnode(v, l)).collect(),
            inputs: self.inputs.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge { u: e.u, v: e.v, lu: fedge(&e.lu), lv: fedge(&e.lv) })
                .collect(),
            adj: self.adj.clone(),
            id_exponent: self.id_exponent,
        }
    }
}

impl<N: Clone, E: Clone> LabeledGraph<N, E> {
    /// Copy without edge `e`; edge ids above `e` shift down by one.
    pub fn without_edge(&self, e: EdgeId) -> Self {
        let mut g = LabeledGraph {
            labels: self.labels.clone(),
            inputs: self.inputs.clone(),
            edges: Vec::with_capacity(self.m().saturating_sub(1)),
            adj: vec![Vec::new(); self.n()],
            id_exponent: self.id_exponent,
        };
        for (i, ed) in self.edges.iter().enumerate() {
            if i != e {
                g.add_edge(ed.u, ed.v, ed.lu.clone(), ed.lv.clone());
            }
        }
        g
    }

    /// Induced subgraph on `keep` (in the given order). Returns the graph and
    /// the map from new ids to old ids.
    pub fn induced(&self, keep: &[NodeId]) -> (Self, Vec<NodeId>) {
        let mut local = vec![usize::MAX; self.n()];
        let mut g = LabeledGraph { id_exponent: self.id_exponent, ..Default::default() };
        for &v in keep {
            local[v] = g.add_node(self.labels[v].clone());
            g.inputs[local[v]] = self.inputs[v].clone();
        }
        for ed in &self.edges {
            if local[ed.u] != usize::MAX && local[ed.v] != usize::MAX {
                g.add_edge(local[ed.u], local[ed.v], ed.lu.clone(), ed.lv.clone());
            }
        }
        (g, keep.to_vec())
    }

    /// Disjoint union; nodes of `other` are renumbered after ours and their
    /// identifiers shifted to stay unique.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let mut g = self.clone();
        let off = g.n();
        let id_off = g.inputs.iter().map(|i| i.ident).max().unwrap_or(0);
        for v in other.nodes() {
            let w = g.add_node(other.labels[v].clone());
            let mut inp = other.inputs[v].clone();
            inp.ident += id_off;
            g.inputs[w] = inp;
        }
        for ed in &other.edges {
            g.add_edge(ed.u + off, ed.v + off, ed.lu.clone(), ed.lv.clone());
        }
        g
    }
}

/// Multi-source BFS inside `scope`, stopping at depth `max_depth`.
/// Unreached nodes get `usize::MAX`.
pub fn bfs<N, E>(
    g: &LabeledGraph<N, E>,
    sources: &[NodeId],
    max_depth: Option<usize>,
    scope: Scope<'_>,
) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if scope.has_node(s) && dist[s] != 0 {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        let d = dist[v];
        if max_depth.is_some_and(|m| d >= m) {
            continue;
        }
        for h in g.half_edges_in(v, scope) {
            if dist[h.other] == usize::MAX {
                dist[h.other] = d + 1;
                queue.push_back(h.other);
            }
        }
    }
    dist
}

/// Hop distance between two node sets; `Ok(None)` means disconnected.
pub fn distance<N, E>(
    g: &LabeledGraph<N, E>,
    a: &[NodeId],
    b: &[NodeId],
) -> Result<Option<usize>, GraphError> {
    if a.is_empty() || b.is_empty() {
        return Err(GraphError::EmptySet);
    }
    if let Some(&v) = a.iter().chain(b).find(|&&v| v >= g.n()) {
        return Err(GraphError::NodeOutOfRange(v));
    }
    let dist = bfs(g, a, None, Scope::FULL);
    let d = b.iter().map(|&v| dist[v]).min().unwrap();
    Ok((d != usize::MAX).then_some(d))
}

/// N_t[S], sorted.
pub fn ball<N, E>(g: &LabeledGraph<N, E>, s: &[NodeId], t: usize) -> Vec<NodeId> {
    let dist = bfs(g, s, Some(t), Scope::FULL);
    (0..g.n()).filter(|&v| dist[v] <= t).collect()
}

/// Connected components inside `scope`; nodes outside get `usize::MAX`.
pub fn components<N, E>(g: &LabeledGraph<N, E>, scope: Scope<'_>) -> (Vec<usize>, usize) {
    let mut comp = vec![usize::MAX; g.n()];
    let mut count = 0;
    for s in g.nodes() {
        if comp[s] != usize::MAX || !scope.has_node(s) {
            continue;
        }
        comp[s] = count;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for h in g.half_edges_in(v, scope) {
                if comp[h.other] == usize::MAX {
                    comp[h.other] = count;
                    stack.push(h.other);
                }
            }
        }
        count += 1;
    }
    (comp, count)
}

/// Largest eccentricity over a component; `None` for an empty graph.
pub fn diameter<N, E>(g: &LabeledGraph<N, E>, nodes: &[NodeId], scope: Scope<'_>) -> Option<usize> {
    nodes
        .iter()
        .map(|&v| {
            bfs(g, &[v], None, scope)
                .into_iter()
                .filter(|&d| d != usize::MAX)
                .max()
                .unwrap_or(0)
        })
        .max()
}

/// The radius-t view of a node set: the open induced subgraph on N_t[S]
/// with inputs restricted to it.
#[derive(Clone, Debug)]
pub struct View<N, E> {
    pub centers: Vec<NodeId>,
    pub radius: usize,
    /// Global ids of the view's nodes; local id `i` is `nodes[i]`.
    pub nodes: Vec<NodeId>,
    /// Distance of each local node from the center set.
    pub dist: Vec<usize>,
    pub graph: LabeledGraph<N, E>,
    /// Global edge id of each local edge.
    pub edge_map: Vec<EdgeId>,
}

impl<N, E> View<N, E> {
    pub fn local(&self, global: NodeId) -> Option<usize> {
        self.nodes.binary_search(&global).ok()
    }
}

pub fn view<N: Clone, E: Clone>(g: &LabeledGraph<N, E>, s: &[NodeId], t: usize) -> View<N, E> {
    let dist = bfs(g, s, Some(t), Scope::FULL);
    let nodes: Vec<NodeId> = (0..g.n()).filter(|&v| dist[v] <= t).collect();
    let mut local = vec![usize::MAX; g.n()];
    let mut graph = LabeledGraph { id_exponent: g.id_exponent, ..Default::default() };
    for &v in &nodes {
        local[v] = graph.add_node(g.labels[v].clone());
        graph.inputs[local[v]] = g.inputs[v].clone();
    }
    let mut edge_map = Vec::new();
    for (i, ed) in g.edges.iter().enumerate() {
        let (a, b) = (local[ed.u], local[ed.v]);
        if a == usize::MAX || b == usize::MAX {
            continue;
        }
        if dist[ed.u] == t && dist[ed.v] == t {
            continue;
        }
        graph.add_edge(a, b, ed.lu.clone(), ed.lv.clone());
        edge_map.push(i);
    }
    let d = nodes.iter().map(|&v| dist[v]).collect();
    View { centers: s.to_vec(), radius: t, nodes, dist: d, graph, edge_map }
}

/// f(v, L_1..L_k): the endpoint of the labeled walk from `v` if the walk
/// exists and is unique, `None` (⊥) otherwise.
pub fn follow_path<N, E: PartialEq>(
    g: &LabeledGraph<N, E>,
    v: NodeId,
    path: &[E],
    scope: Scope<'_>,
) -> Option<NodeId> {
    // Walk counts per endpoint, saturated at 2 since only uniqueness matters.
    let mut frontier: Vec<(NodeId, u8)> = vec![(v, 1)];
    let mut next: Vec<(NodeId, u8)> = Vec::new();
    for l in path {
        next.clear();
        for &(cur, c) in &frontier {
            for h in g.half_edges_in(cur, scope) {
                if h.here != l {
                    continue;
                }
                match next.iter_mut().find(|(w, _)| *w == h.other) {
                    Some(slot) => slot.1 = (slot.1 + c).min(2),
                    None => next.push((h.other, c)),
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        std::mem::swap(&mut frontier, &mut next);
    }
    match frontier.as_slice() {
        [(w, 1)] => Some(*w),
        _ => None,
    }
}

/// G^k: same nodes and node labels, an edge whenever 1 ≤ dist ≤ k.
pub fn power_graph<N: Clone, E>(g: &LabeledGraph<N, E>, k: usize) -> LabeledGraph<N, ()> {
    assert!(k >= 1, "power graph needs k >= 1");
    let mut p = LabeledGraph { id_exponent: g.id_exponent, ..Default::default() };
    for v in g.nodes() {
        let w = p.add_node(g.labels[v].clone());
        p.inputs[w] = g.inputs[v].clone();
    }
    let mut dist = vec![usize::MAX; g.n()];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    for v in g.nodes() {
        dist[v] = 0;
        touched.push(v);
        queue.push_back(v);
        while let Some(x) = queue.pop_front() {
            if dist[x] >= k {
                continue;
            }
            for y in g.neighbors(x) {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    touched.push(y);
                    queue.push_back(y);
                }
            }
        }
        touched.sort_unstable();
        for &u in &touched {
            if u > v {
                p.add_edge(v, u, (), ());
            }
        }
        for &u in &touched {
            dist[u] = usize::MAX;
        }
        touched.clear();
    }
    p
}
