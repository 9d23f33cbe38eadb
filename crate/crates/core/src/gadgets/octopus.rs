use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::tree::{add_tree_edges, tree_index, tree_violations};
use super::{EdgeClasses, EdgeLabel, Instance, NodeKind};
use crate::graph::{HalfEdge, LabeledGraph, NodeId, Scope};
use crate::lcl::Violation;

use EdgeLabel::{ChL, ChR, Hp1, Hp2, Ph, P};

/// (x, η, W): head height, per-leaf port counts and port heights.
/// `heights[i][j]` is the height of port (i, j + 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OctopusSpec {
    pub x: u32,
    pub eta: Vec<u8>,
    pub heights: Vec<Vec<u32>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("head height must be at least 1")]
    HeadHeight,
    #[error("eta has {got} entries, expected {want}")]
    EtaLength { got: usize, want: usize },
    #[error("eta entries must be 1 or 2")]
    EtaValue,
    #[error("port heights for leaf {0} do not match eta")]
    Heights(usize),
    #[error("port heights must be at least 1")]
    ZeroHeight,
}

impl OctopusSpec {
    /// All ports of one height.
    pub fn uniform(x: u32, eta: Vec<u8>, h: u32) -> Self {
        let heights = eta.iter().map(|&e| vec![h; e as usize]).collect();
        OctopusSpec { x, eta, heights }
    }

    /// Builds a spec from a flat list of port heights in index order.
    pub fn from_flat(x: u32, eta: Vec<u8>, flat: &[u32]) -> Result<Self, SpecError> {
        let mut it = flat.iter().copied();
        let mut heights = Vec::new();
        for (i, &e) in eta.iter().enumerate() {
            let row: Vec<u32> = it.by_ref().take(e as usize).collect();
            if row.len() != e as usize {
                return Err(SpecError::Heights(i));
            }
            heights.push(row);
        }
        if it.next().is_some() {
            return Err(SpecError::Heights(eta.len()));
        }
        let s = OctopusSpec { x, eta, heights };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.x == 0 || self.x > 30 {
            return Err(SpecError::HeadHeight);
        }
        let want = 1usize << (self.x - 1);
        if self.eta.len() != want {
            return Err(SpecError::EtaLength { got: self.eta.len(), want });
        }
        if self.eta.iter().any(|&e| e != 1 && e != 2) {
            return Err(SpecError::EtaValue);
        }
        for (i, row) in self.heights.iter().enumerate() {
            if row.len() != self.eta[i] as usize {
                return Err(SpecError::Heights(i));
            }
            if row.iter().any(|&h| h == 0 || h > 30) {
                return Err(SpecError::ZeroHeight);
            }
        }
        if self.heights.len() != self.eta.len() {
            return Err(SpecError::Heights(self.heights.len()));
        }
        Ok(())
    }

    /// The index set I in its natural order: leaf, then hp_link_1 before hp_link_2.
    pub fn ports(&self) -> Vec<(usize, u8)> {
        self.eta.iter().enumerate().flat_map(|(i, &e)| (1..=e).map(move |j| (i, j))).collect()
    }

    pub fn node_count(&self) -> usize {
        let head = (1usize << self.x) - 1;
        head + self.heights.iter().flatten().map(|&h| (1usize << h) - 1).sum::<usize>()
    }

    /// Every valid spec with at most `max_nodes` nodes.
    pub fn all_up_to(max_nodes: usize) -> Vec<OctopusSpec> {
        let mut out = Vec::new();
        let mut x = 1;
        while (1usize << x) - 1 + (1usize << (x - 1)) <= max_nodes {
            let leaves = 1usize << (x - 1);
            for mask in 0..(1u32 << leaves) {
                let eta: Vec<u8> = (0..leaves).map(|i| 1 + ((mask >> i) & 1) as u8).collect();
                let ports: usize = eta.iter().map(|&e| e as usize).sum();
                let mut flat = vec![1u32; ports];
                loop {
                    let spec = OctopusSpec::from_flat(x, eta.clone(), &flat).unwrap();
                    if spec.node_count() <= max_nodes {
                        out.push(spec);
                    }
                    // Odometer over port heights, pruned by the node bound.
                    let mut i = 0;
                    while i < ports {
                        flat[i] += 1;
                        let probe = OctopusSpec::from_flat(x, eta.clone(), &flat).unwrap();
                        if probe.node_count() <= max_nodes {
                            break;
                        }
                        flat[i] = 1;
                        i += 1;
                    }
                    if i == ports {
                        break;
                    }
                }
            }
            x += 1;
        }
        out
    }
}

/// Where the parts of a built octopus live.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OctopusLayout {
    pub head_root: NodeId,
    pub head_nodes: Vec<NodeId>,
    /// One entry per port in index order: (i, j, node ids, height).
    pub ports: Vec<PortLayout>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortLayout {
    pub leaf: usize,
    pub j: u8,
    pub height: u32,
    pub nodes: Vec<NodeId>,
    pub root: NodeId,
    pub leftmost_leaf: NodeId,
}

/// Appends an octopus to `g` and returns its layout.
pub(crate) fn append_octopus(g: &mut Instance, spec: &OctopusSpec) -> OctopusLayout {
    let base = g.n();
    let head_n = (1usize << spec.x) - 1;
    for _ in 0..head_n {
        g.add_node(NodeKind::Head);
    }
    add_tree_edges(g, base, spec.x);
    let mut ports = Vec::new();
    for (i, j) in spec.ports() {
        let h = spec.heights[i][(j - 1) as usize];
        let pbase = g.n();
        let pn = (1usize << h) - 1;
        for _ in 0..pn {
            g.add_node(NodeKind::Port);
        }
        add_tree_edges(g, pbase, h);
        let leaf = base + tree_index(spec.x - 1, i as u64);
        let lab = if j == 1 { Hp1 } else { Hp2 };
        g.add_edge(leaf, pbase, lab, Ph);
        ports.push(PortLayout {
            leaf: i,
            j,
            height: h,
            nodes: (pbase..pbase + pn).collect(),
            root: pbase,
            leftmost_leaf: pbase + tree_index(h - 1, 0),
        });
    }
    OctopusLayout { head_root: base, head_nodes: (base..base + head_n).collect(), ports }
}

/// Canonically labeled (x, η, W)-octopus gadget.
pub fn build_octopus(spec: &OctopusSpec) -> Result<(Instance, OctopusLayout), SpecError> {
    spec.validate()?;
    let mut g = LabeledGraph::new();
    let layout = append_octopus(&mut g, spec);
    Ok((g, layout))
}

fn has(hs: &[HalfEdge<'_, EdgeLabel>], l: EdgeLabel) -> bool {
    hs.iter().any(|h| *h.here == l)
}

/// C^octopus at `v`. `scope` is the graph the octopus constraints look at;
/// `tree_scope` must be `scope` further restricted to internal edges.
pub fn octopus_violations(
    g: &Instance,
    scope: Scope<'_>,
    tree_scope: Scope<'_>,
    v: NodeId,
) -> Vec<Violation> {
    let mut out = Vec::new();
    if !scope.has_node(v) {
        return out;
    }
    for mut t in tree_violations(g, tree_scope, v) {
        t.constraint = format!("octopus.0/{}", t.constraint);
        out.push(t);
    }
    let hs: Vec<HalfEdge<'_, EdgeLabel>> = g.half_edges_in(v, scope).collect();
    let kind = *g.label(v);
    let viol = |c: &str, d: String| Violation::new(v, c, d);

    for h in &hs {
        if h.here.is_inter_link() {
            out.push(viol("octopus.alphabet", format!("half-edge label {} outside E^octopus", h.here)));
        }
        let internal = !h.here.is_octopus_link() && !h.there.is_octopus_link();
        let ku = *g.label(h.other);
        let same = (kind == NodeKind::Head && ku == NodeKind::Head)
            || (kind == NodeKind::Port && ku == NodeKind::Port);
        if same != internal {
            out.push(viol("octopus.1", format!("edge {} to {} ({ku})", h.edge, h.other)));
        }
        let (a, b) = (*h.here, *h.there);
        if (a.is_hp() && b != Ph) || (a == Ph && !b.is_hp()) || (b.is_hp() && a != Ph) || (b == Ph && !a.is_hp()) {
            out.push(viol("octopus.2", format!("edge {} labeled {a}/{b}", h.edge)));
        }
    }
    if kind == NodeKind::Head && has(&hs, Ph) {
        out.push(viol("octopus.3", "head node with ph_link".into()));
    }
    if kind == NodeKind::Port && (has(&hs, Hp1) || has(&hs, Hp2)) {
        out.push(viol("octopus.4", "port node with hp_link".into()));
    }
    let any_hp = has(&hs, Hp1) || has(&hs, Hp2);
    let head_leaf = kind == NodeKind::Head && !has(&hs, ChL) && !has(&hs, ChR);
    if any_hp != head_leaf {
        out.push(viol("octopus.5", "hp_link present iff head leaf".into()));
    }
    let port_root = kind == NodeKind::Port && !has(&hs, P);
    if has(&hs, Ph) != port_root {
        out.push(viol("octopus.6", "ph_link present iff port root".into()));
    }
    for l in [Ph, Hp1, Hp2] {
        if hs.iter().filter(|h| *h.here == l).count() > 1 {
            out.push(viol("octopus.7", format!("more than one {l}")));
        }
    }
    if has(&hs, Hp2) && !has(&hs, Hp1) {
        out.push(viol("octopus.8", "hp_link_2 without hp_link_1".into()));
    }
    out
}

/// C^octopus over the whole graph.
pub fn check_octopus(g: &Instance) -> Vec<Violation> {
    let classes = EdgeClasses::new(g);
    let ts = Scope::edges(&classes.internal);
    g.nodes().flat_map(|v| octopus_violations(g, Scope::FULL, ts, v)).collect()
}
