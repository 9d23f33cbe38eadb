use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::gadgets::{tree_violations, EdgeLabel, Instance, NodeKind};
use crate::graph::{follow_path, LabeledGraph, NodeId, Scope};
use crate::lcl::{Checker, Labeling, LclProblem, Partial, Unknown, Violation};

/// Pointer directions, named by the half-edge label they follow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dir {
    Up,
    DownL,
    DownR,
    Left,
    Right,
}

impl Dir {
    pub const ALL: [Dir; 5] = [Dir::Up, Dir::DownL, Dir::DownR, Dir::Left, Dir::Right];

    pub fn label(self) -> EdgeLabel {
        match self {
            Dir::Up => EdgeLabel::P,
            Dir::DownL => EdgeLabel::ChL,
            Dir::DownR => EdgeLabel::ChR,
            Dir::Left => EdgeLabel::L,
            Dir::Right => EdgeLabel::R,
        }
    }

    /// May a pointer in this direction land on a node labeled `t`?
    pub fn accepts(self, t: TreeOut) -> bool {
        use TreeOut::*;
        match (self, t) {
            (_, Bot) => false,
            (_, Err) => true,
            (Dir::Up, Ptr(_)) => true,
            (Dir::DownL | Dir::DownR, Ptr(d)) => d != Dir::Up,
            (Dir::Right, Ptr(d)) => d == Dir::Right,
            (Dir::Left, Ptr(d)) => d == Dir::Left,
        }
    }
}

/// Output of Π^badTree at one node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeOut {
    Bot,
    Err,
    Ptr(Dir),
}

impl TreeOut {
    pub const ALL: [TreeOut; 7] = [
        TreeOut::Bot,
        TreeOut::Err,
        TreeOut::Ptr(Dir::Up),
        TreeOut::Ptr(Dir::DownL),
        TreeOut::Ptr(Dir::DownR),
        TreeOut::Ptr(Dir::Left),
        TreeOut::Ptr(Dir::Right),
    ];

    pub fn is_bot(self) -> bool {
        self == TreeOut::Bot
    }
}

impl fmt::Display for TreeOut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeOut::Bot => f.write_str("⊥"),
            TreeOut::Err => f.write_str("err"),
            TreeOut::Ptr(d) => write!(f, "{d:?}"),
        }
    }
}

/// Π^badTree at `v` inside `scope`. `mark` is v's mark, `out` reads
/// outputs (possibly unassigned). `tag` prefixes the constraint name.
pub fn badtree_item(
    g: &Instance,
    scope: Scope<'_>,
    v: NodeId,
    mark: Partial<bool>,
    out: &dyn Fn(NodeId) -> Partial<TreeOut>,
    tag: &str,
) -> Partial<Option<Violation>> {
    match out(v)? {
        TreeOut::Bot => Ok(None),
        TreeOut::Err => {
            if !tree_violations(g, scope, v).is_empty() {
                return Ok(None);
            }
            if mark? {
                Ok(None)
            } else {
                Ok(Some(Violation::new(v, format!("{tag}.err"), "error output at an unmarked clean node")))
            }
        }
        TreeOut::Ptr(d) => {
            let Some(t) = follow_path(g, v, &[d.label()], scope) else {
                return Ok(Some(Violation::new(v, format!("{tag}.target"), format!("no unique {} neighbor", d.label()))));
            };
            let to = out(t)?;
            if d.accepts(to) {
                Ok(None)
            } else {
                Ok(Some(Violation::new(v, format!("{tag}.chain"), format!("{d:?} pointer lands on {to}"))))
            }
        }
    }
}

/// Outputs and decision rounds of one badTree instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeRun {
    pub out: Vec<TreeOut>,
    /// Round in which each node fixed a non-⊥ label; `None` for ⊥.
    pub decided: Vec<Option<usize>>,
    /// Round at which undecided nodes settle on ⊥.
    pub end: usize,
}

/// ⌈log2(n + 1)⌉, the per-stage budget unit of all detectors.
pub fn log_budget(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

/// Pointer targets per direction within `scope`.
pub(crate) fn pointer_targets(g: &Instance, scope: Scope<'_>) -> Vec<[Option<NodeId>; 5]> {
    g.nodes()
        .map(|v| {
            let mut t = [None; 5];
            if scope.has_node(v) {
                for (i, d) in Dir::ALL.iter().enumerate() {
                    t[i] = follow_path(g, v, &[d.label()], scope);
                }
            }
            t
        })
        .collect()
}

/// The pointer a node takes once it sees decided neighbors. Down pointers
/// win (smallest target identifier first), then up, right, left.
pub(crate) fn choose_pointer(
    g: &Instance,
    targets: &[Option<NodeId>; 5],
    seen: &dyn Fn(NodeId) -> Option<TreeOut>,
) -> Option<TreeOut> {
    let mut down: Option<(u64, Dir)> = None;
    for d in [Dir::DownL, Dir::DownR] {
        if let Some(t) = targets[d as usize] {
            if seen(t).is_some_and(|o| d.accepts(o)) {
                let id = g.ident(t);
                if down.map_or(true, |(b, _)| id < b) {
                    down = Some((id, d));
                }
            }
        }
    }
    if let Some((_, d)) = down {
        return Some(TreeOut::Ptr(d));
    }
    for d in [Dir::Up, Dir::Right, Dir::Left] {
        if let Some(t) = targets[d as usize] {
            if seen(t).is_some_and(|o| d.accepts(o)) {
                return Some(TreeOut::Ptr(d));
            }
        }
    }
    None
}

/// Event-driven badTree solver on `scope`. Nodes that are marked or
/// violate C^tree output `Err` at round `t0`; pointers are then fixed in
/// rounds `t0 + 1 ..= t0 + rounds`, each from decisions of earlier rounds.
pub fn run_badtree_stage(g: &Instance, scope: Scope<'_>, marked: &[bool], t0: usize, rounds: usize) -> TreeRun {
    let n = g.n();
    let targets = pointer_targets(g, scope);
    let mut out = vec![TreeOut::Bot; n];
    let mut decided = vec![None; n];
    let mut frontier: Vec<NodeId> = Vec::new();
    for v in g.nodes() {
        if scope.has_node(v) && (marked[v] || !tree_violations(g, scope, v).is_empty()) {
            out[v] = TreeOut::Err;
            decided[v] = Some(t0);
            frontier.push(v);
        }
    }
    let mut queued = vec![false; n];
    for t in (t0 + 1)..=(t0 + rounds) {
        if frontier.is_empty() {
            break;
        }
        let mut cand: Vec<NodeId> = Vec::new();
        for &u in &frontier {
            for h in g.half_edges_in(u, scope) {
                let w = h.other;
                if decided[w].is_none() && !queued[w] {
                    queued[w] = true;
                    cand.push(w);
                }
            }
        }
        cand.sort_unstable();
        let mut fresh = Vec::new();
        for &w in &cand {
            queued[w] = false;
            let seen = |x: NodeId| decided[x].filter(|&r| r < t).map(|_| out[x]);
            if let Some(o) = choose_pointer(g, &targets[w], &seen) {
                fresh.push((w, o));
            }
        }
        frontier.clear();
        for (w, o) in fresh {
            out[w] = o;
            decided[w] = Some(t);
            frontier.push(w);
        }
    }
    TreeRun { out, decided, end: t0 + rounds }
}

/// Gather radius needed before C^tree can be evaluated.
pub const TREE_GATHER: usize = 3;

/// Standalone Π^badTree solver: marks come from the node inputs.
pub fn solve_badtree(g: &Instance) -> TreeRun {
    let marked: Vec<bool> = g.nodes().map(|v| g.input(v).mark).collect();
    run_badtree_stage(g, Scope::FULL, &marked, TREE_GATHER, 2 * log_budget(g.n()))
}

/// Per-node locality of a standalone run.
pub fn badtree_radius(run: &TreeRun) -> Vec<usize> {
    run.decided.iter().map(|d| d.unwrap_or(run.end)).collect()
}

pub fn check_badtree(g: &Instance, out: &[TreeOut]) -> Vec<Violation> {
    let p = BadTree;
    let lab = Labeling::from_nodes(out.to_vec(), g.m());
    let res = p.checker(g).check_all(&lab);
    res
}

/// Π^badTree as an LCL on E^tree-labeled graphs; the mark bit is the node
/// input's `mark`.
#[derive(Clone, Copy, Debug, Default)]
pub struct BadTree;

struct BadTreeChecker<'a> {
    g: &'a Instance,
}

impl Checker<TreeOut> for BadTreeChecker<'_> {
    fn n(&self) -> usize {
        self.g.n()
    }

    fn check_node(&self, out: &Labeling<TreeOut>, v: NodeId) -> Vec<Violation> {
        let read = |u: NodeId| out.node(u).copied().ok_or(Unknown);
        let mut res = Vec::new();
        crate::lcl::item(&mut res, badtree_item(self.g, Scope::FULL, v, Ok(self.g.input(v).mark), &read, "badtree"));
        res
    }

    fn node_candidates(&self, v: NodeId) -> Option<Vec<TreeOut>> {
        let mut c = vec![TreeOut::Bot];
        if self.g.input(v).mark || !tree_violations(self.g, Scope::FULL, v).is_empty() {
            c.push(TreeOut::Err);
        }
        for d in Dir::ALL {
            if follow_path(self.g, v, &[d.label()], Scope::FULL).is_some() {
                c.push(TreeOut::Ptr(d));
            }
        }
        Some(c)
    }
}

impl LclProblem for BadTree {
    type NodeIn = NodeKind;
    type EdgeIn = EdgeLabel;
    type Out = TreeOut;
    type HalfOut = ();

    fn name(&self) -> String {
        "badtree".into()
    }
    fn radius(&self) -> usize {
        3
    }
    fn node_alphabet(&self) -> Vec<TreeOut> {
        TreeOut::ALL.to_vec()
    }
    fn half_alphabet(&self) -> Vec<()> {
        vec![()]
    }
    fn checker<'a>(&'a self, g: &'a LabeledGraph<NodeKind, EdgeLabel>) -> Box<dyn Checker<TreeOut> + 'a> {
        Box::new(BadTreeChecker { g })
    }
}

/// Nodes of the scope's component(s) containing a marked or violating node.
pub fn broken_components(g: &Instance, scope: Scope<'_>, marked: &[bool]) -> Vec<bool> {
    let mut bad = vec![false; g.n()];
    let mut q = VecDeque::new();
    for v in g.nodes() {
        if scope.has_node(v) && (marked[v] || !tree_violations(g, scope, v).is_empty()) {
            bad[v] = true;
            q.push_back(v);
        }
    }
    while let Some(v) = q.pop_front() {
        for h in g.half_edges_in(v, scope) {
            if !bad[h.other] {
                bad[h.other] = true;
                q.push_back(h.other);
            }
        }
    }
    bad
}
