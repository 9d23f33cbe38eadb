use serde::{Deserialize, Serialize};

use super::{EdgeLabel, Instance, NodeKind};
use crate::graph::{follow_path, HalfEdge, LabeledGraph, NodeId, Scope};
use crate::lcl::Violation;

use EdgeLabel::{ChL, ChR, L, P, R};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeGadgetSpec {
    pub height: u32,
}

/// Node id of coordinate (l, k) in a gadget built by `build_tree_gadget`.
pub fn tree_index(l: u32, k: u64) -> usize {
    ((1u64 << l) - 1 + k) as usize
}

/// Canonical labeled tree-like gadget of the given height, every node
/// labeled `kind`. Node (l, k) gets id 2^l − 1 + k.
pub fn build_tree_gadget_with(spec: TreeGadgetSpec, kind: NodeKind) -> Instance {
    assert!(spec.height >= 1, "tree gadget height must be at least 1");
    assert!(spec.height <= 40, "tree gadget height too large");
    let mut g = LabeledGraph::new();
    for l in 0..spec.height {
        for _ in 0..(1u64 << l) {
            g.add_node(kind);
        }
    }
    add_tree_edges(&mut g, 0, spec.height);
    g
}

pub fn build_tree_gadget(spec: TreeGadgetSpec) -> Instance {
    build_tree_gadget_with(spec, NodeKind::Plain)
}

/// Adds the tree-like gadget edges over nodes `offset + tree_index(l, k)`.
pub(crate) fn add_tree_edges(g: &mut Instance, offset: usize, height: u32) {
    for l in 0..height {
        let width = 1u64 << l;
        for k in 0..width {
            let v = offset + tree_index(l, k);
            if l > 0 {
                let parent = offset + tree_index(l - 1, k / 2);
                let down = if k % 2 == 0 { ChL } else { ChR };
                g.add_edge(v, parent, P, down);
            }
            if k + 1 < width {
                g.add_edge(v, offset + tree_index(l, k + 1), R, L);
            }
        }
    }
}

/// Coordinates (l, k) of every node of a clean gadget reachable from its
/// root inside `scope`, computed through child labels. Nodes not reached
/// stay `None`.
pub fn tree_coordinates(g: &Instance, root: NodeId, scope: Scope<'_>) -> Vec<Option<(u32, u64)>> {
    let mut coords = vec![None; g.n()];
    coords[root] = Some((0, 0));
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        let (l, k) = coords[v].unwrap();
        for h in g.half_edges_in(v, scope) {
            let ck = match h.here {
                ChL => 2 * k,
                ChR => 2 * k + 1,
                _ => continue,
            };
            if coords[h.other].is_none() {
                coords[h.other] = Some((l + 1, ck));
                stack.push(h.other);
            }
        }
    }
    coords
}

fn has(hs: &[HalfEdge<'_, EdgeLabel>], l: EdgeLabel) -> bool {
    hs.iter().any(|h| *h.here == l)
}

fn has_in(g: &Instance, v: NodeId, scope: Scope<'_>, l: EdgeLabel) -> bool {
    g.half_edges_in(v, scope).any(|h| *h.here == l)
}

/// C^tree at `u` inside `scope`.
pub fn tree_violations(g: &Instance, scope: Scope<'_>, u: NodeId) -> Vec<Violation> {
    let mut out = Vec::new();
    if !scope.has_node(u) {
        return out;
    }
    let hs: Vec<HalfEdge<'_, EdgeLabel>> = g.half_edges_in(u, scope).collect();
    let viol = |c: &str, d: String| Violation::new(u, c, d);

    for h in &hs {
        if !h.here.is_tree() {
            out.push(viol("tree.alphabet", format!("half-edge label {} outside E^tree", h.here)));
        }
    }
    for (i, a) in hs.iter().enumerate() {
        if hs[i + 1..].iter().any(|b| b.here == a.here) {
            out.push(viol("tree.1", format!("label {} repeated", a.here)));
        }
    }
    for h in &hs {
        let (a, b) = (*h.here, *h.there);
        if (a == L) != (b == R) || (a == R) != (b == L) {
            out.push(viol("tree.2", format!("edge {} labeled {a}/{b}", h.edge)));
        }
        if (a == P) != b.is_child() || a.is_child() != (b == P) {
            out.push(viol("tree.3", format!("edge {} labeled {a}/{b}", h.edge)));
        }
    }
    let up_left = hs.iter().any(|h| *h.here == P && *h.there == ChL);
    let up_right = hs.iter().any(|h| *h.here == P && *h.there == ChR);
    if up_left && follow_path(g, u, &[P, ChR, L], scope) != Some(u) {
        out.push(viol("tree.4", "f(u, P, ChR, L) != u".into()));
    }
    if up_right && has(&hs, R) && follow_path(g, u, &[P, R, ChL, L], scope) != Some(u) {
        out.push(viol("tree.5", "f(u, P, R, ChL, L) != u".into()));
    }
    if has(&hs, ChL) != has(&hs, ChR) {
        out.push(viol("tree.6", "exactly one child label".into()));
    }
    if !has(&hs, P) != (!has(&hs, L) && !has(&hs, R)) {
        out.push(viol("tree.7", "parent label inconsistent with sibling labels".into()));
    }
    if !has(&hs, ChL) && !has(&hs, ChR) {
        for dir in [L, R] {
            if let Some(w) = follow_path(g, u, &[dir], scope) {
                if has_in(g, w, scope, ChL) || has_in(g, w, scope, ChR) {
                    out.push(viol("tree.8", format!("f(u, {dir}) has children but u has none")));
                }
            }
        }
    }
    let parent = follow_path(g, u, &[P], scope);
    let parent_has = |l: EdgeLabel| parent.is_some_and(|p| has_in(g, p, scope, l));
    if up_right && has(&hs, R) != parent_has(R) {
        out.push(viol("tree.9", "right boundary differs from parent".into()));
    }
    if up_left && has(&hs, L) != parent_has(L) {
        out.push(viol("tree.9", "left boundary differs from parent".into()));
    }
    out
}

/// C^tree over the whole graph.
pub fn check_tree(g: &Instance) -> Vec<Violation> {
    g.nodes().flat_map(|v| tree_violations(g, Scope::FULL, v)).collect()
}
