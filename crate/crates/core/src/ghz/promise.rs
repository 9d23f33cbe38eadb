use std::fmt::Debug;

use super::linearizable::LinearizableProblem;
use crate::gadgets::{proper_ok_mask, Comp, EdgeClasses, EdgeLabel, Instance, NodeKind};
use crate::graph::{bfs, follow_path, NodeId, Scope};
use crate::lcl::{item, Partial, Unknown, Violation};

/// Distance a node inspects to evaluate C^promise on a proper instance.
pub const PROMISE_RADIUS: usize = 2;

/// Nodes whose radius-r ball (inside `nodes`) satisfies C^proper
/// everywhere. Only these are bound by C^promise.
pub fn promise_clean(g: &Instance, classes: &EdgeClasses, nodes: Option<&[bool]>) -> Vec<bool> {
    let ok = proper_ok_mask(g, classes, nodes);
    let scope = Scope { nodes, edges: None };
    let bad: Vec<NodeId> = g.nodes().filter(|&v| scope.has_node(v) && !ok[v]).collect();
    let dist = bfs(g, &bad, Some(PROMISE_RADIUS), scope);
    g.nodes().map(|v| scope.has_node(v) && dist[v] > PROMISE_RADIUS).collect()
}

/// C^promise items 1-8 at `v` inside `scope`. `out(u)` reads a node's
/// promise output (`Ok(None)` is ⊥, `Err` means not yet assigned).
pub fn promise_items<S, F>(
    g: &Instance,
    p: &LinearizableProblem<S>,
    scope: Scope<'_>,
    v: NodeId,
    out: F,
) -> Vec<Violation>
where
    S: Ord + Clone + Debug,
    F: Fn(NodeId) -> Partial<Option<S>>,
{
    let mut res = Vec::new();
    let kind = *g.label(v);
    let here: Vec<EdgeLabel> = g.half_edges_in(v, scope).map(|h| *h.here).collect();
    let has = |l: EdgeLabel| here.contains(&l);
    let viol = |c: &str, d: String| Some(Violation::new(v, c, d));
    let label_of = |u: Option<NodeId>| -> Partial<Option<Option<S>>> {
        match u {
            Some(u) => out(u).map(Some),
            None => Ok(None),
        }
    };

    if kind == NodeKind::Port {
        item(&mut res, out(v).map(|o| o.is_none().then(|| viol("promise.1", "port node outputs ⊥".into())).flatten()));
        for h in g.half_edges_in(v, scope) {
            if *g.label(h.other) != NodeKind::Port {
                continue;
            }
            item(
                &mut res,
                (|| {
                    let (a, b) = (out(v)?, out(h.other)?);
                    Ok((a != b).then(|| viol("promise.3", format!("{a:?} vs {b:?} at node {}", h.other))).flatten())
                })(),
            );
        }
    } else {
        item(&mut res, out(v).map(|o| o.map(|s| format!("{s:?}")).and_then(|s| viol("promise.2", s))));
    }

    if kind == NodeKind::Head && !has(EdgeLabel::ChL) && !has(EdgeLabel::ChR) {
        let eta = here.iter().filter(|l| l.is_hp()).count();
        let port = |j: EdgeLabel| follow_path(g, v, &[j], scope);
        let p1 = port(EdgeLabel::Hp1);
        let pj = if eta == 2 { port(EdgeLabel::Hp2) } else { p1 };
        let in_set = |c: &str, set: &std::collections::BTreeSet<S>, u: Option<NodeId>| -> Partial<Option<Violation>> {
            Ok(match label_of(u)? {
                Some(Some(s)) if set.contains(&s) => None,
                Some(o) => Some(Violation::new(v, c, format!("{o:?} at node {}", u.unwrap()))),
                None => None,
            })
        };
        let pair = |c: &str, a: Option<NodeId>, b: Option<NodeId>| -> Partial<Option<Violation>> {
            let (la, lb) = (label_of(a)?, label_of(b)?);
            Ok(match (la, lb) {
                (Some(Some(x)), Some(Some(y))) if p.allows_pair(&x, &y) => None,
                (Some(x), Some(y)) => Some(Violation::new(v, c, format!("({x:?}, {y:?})"))),
                _ => None,
            })
        };
        if !has(EdgeLabel::L) {
            item(&mut res, in_set("promise.4", &p.first, p1));
        }
        if !has(EdgeLabel::R) && (eta == 1 || eta == 2) {
            item(&mut res, in_set("promise.5", &p.last, pj));
        }
        if eta == 2 {
            item(&mut res, pair("promise.6", p1, pj));
        }
        if eta == 1 || eta == 2 {
            if let Some(u) = follow_path(g, v, &[EdgeLabel::R], scope) {
                item(&mut res, pair("promise.7", pj, follow_path(g, u, &[EdgeLabel::Hp1], scope)));
            }
        }
    }

    if kind == NodeKind::Inter {
        item(
            &mut res,
            (|| {
                let mut labels = Vec::new();
                for h in g.half_edges_in(v, scope) {
                    match out(h.other)? {
                        Some(s) => labels.push(s),
                        None => return Ok(viol("promise.8", format!("⊥ at neighbor {}", h.other))),
                    }
                }
                Ok((!p.allows_black(&labels)).then(|| viol("promise.8", format!("{labels:?} not in B"))).flatten())
            })(),
        );
    }
    res
}

/// C^promise on the subgraph induced by `nodes` (the whole graph when
/// `None`). Nodes with a C^proper violation within distance r are exempt.
pub fn check_promise<S: Ord + Clone + Debug>(
    g: &Instance,
    p: &LinearizableProblem<S>,
    out: &[Option<S>],
    nodes: Option<&[bool]>,
) -> Vec<Violation> {
    let classes = EdgeClasses::new(g);
    let clean = promise_clean(g, &classes, nodes);
    let scope = Scope { nodes, edges: None };
    g.nodes()
        .filter(|&v| clean[v])
        .flat_map(|v| promise_items(g, p, scope, v, |u| Ok::<_, Unknown>(out[u].clone())))
        .collect()
}

/// Per-edge labels read off the port gadgets. `None` if some edge has no
/// port node or a port gadget is not constant.
pub fn promise_to_linearizable<S: Clone + PartialEq>(comp: &[Comp], edges: usize, out: &[Option<S>]) -> Option<Vec<S>> {
    let mut sol: Vec<Option<S>> = vec![None; edges];
    for (v, c) in comp.iter().enumerate() {
        if let Comp::Edge(e) = *c {
            let s = out[v].clone()?;
            match &sol[e] {
                Some(t) if *t != s => return None,
                Some(_) => {}
                None => sol[e] = Some(s),
            }
        }
    }
    sol.into_iter().collect()
}

/// Every port node copies its edge's label; all other nodes output ⊥.
pub fn linearizable_to_promise<S: Clone>(comp: &[Comp], sol: &[S]) -> Vec<Option<S>> {
    comp.iter()
        .map(|c| match *c {
            Comp::Edge(e) => Some(sol[e].clone()),
            _ => None,
        })
        .collect()
}
