use super::octopus::octopus_violations;
use super::{EdgeClasses, EdgeLabel, Instance, NodeKind};
use crate::graph::{HalfEdge, NodeId, Scope};
use crate::lcl::Violation;

use EdgeLabel::{ChL, ChR, Ip, Pi, L};

/// C^proper at `v`, inside the subgraph induced by `nodes` (all nodes when
/// `None`).
pub fn proper_violations(
    g: &Instance,
    classes: &EdgeClasses,
    nodes: Option<&[bool]>,
    v: NodeId,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let full = Scope { nodes, edges: None };
    if !full.has_node(v) {
        return out;
    }
    let kind = *g.label(v);
    let viol = |c: &str, d: String| Violation::new(v, c, d);
    if kind == NodeKind::Plain {
        out.push(viol("proper.alphabet", "node label outside V^proper".into()));
    }
    let oct = Scope { nodes, edges: Some(&classes.intra) };
    let tree = Scope { nodes, edges: Some(&classes.intra_internal) };
    for mut o in octopus_violations(g, oct, tree, v) {
        o.constraint = format!("proper.0/{}", o.constraint);
        out.push(o);
    }

    let hs: Vec<HalfEdge<'_, EdgeLabel>> = g.half_edges_in(v, full).collect();
    let has = |l: EdgeLabel| hs.iter().any(|h| *h.here == l);
    for h in &hs {
        let (a, b) = (*h.here, *h.there);
        if (a == Pi) != (b == Ip) || (a == Ip) != (b == Pi) {
            out.push(viol("proper.1", format!("edge {} labeled {a}/{b}", h.edge)));
        }
    }
    let leftmost_leaf = kind == NodeKind::Port && !has(ChL) && !has(ChR) && !has(L);
    if has(Pi) != leftmost_leaf {
        out.push(viol("proper.2", "pi_link present iff left-most port leaf".into()));
    }
    if kind == NodeKind::Inter {
        if hs.is_empty() {
            out.push(viol("proper.3", "inter-octopus node of degree 0".into()));
        }
        if hs.iter().any(|h| *h.here != Ip) {
            out.push(viol("proper.3", "inter-octopus node with a non-ip_link half-edge".into()));
        }
    } else if has(Ip) {
        out.push(viol("proper.3", "ip_link at a node that is not inter-octopus".into()));
    }
    out
}

/// C^proper at every node of the subgraph induced by `nodes`.
pub fn proper_violations_all(g: &Instance, nodes: Option<&[bool]>) -> Vec<Violation> {
    let classes = EdgeClasses::new(g);
    g.nodes().flat_map(|v| proper_violations(g, &classes, nodes, v)).collect()
}

/// C^proper over the whole graph.
pub fn check_proper(g: &Instance) -> Vec<Violation> {
    proper_violations_all(g, None)
}

/// Per-node flag: does `v` satisfy C^proper inside `nodes`?
pub fn proper_ok_mask(g: &Instance, classes: &EdgeClasses, nodes: Option<&[bool]>) -> Vec<bool> {
    g.nodes().map(|v| proper_violations(g, classes, nodes, v).is_empty()).collect()
}
