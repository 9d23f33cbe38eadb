use serde::{Deserialize, Serialize};

use super::badtree::{badtree_item, log_budget, run_badtree_stage, Dir, TreeOut, TreeRun, TREE_GATHER};
use crate::gadgets::{octopus_violations, tree_violations, EdgeClasses, EdgeLabel, Instance, NodeKind};
use crate::graph::{follow_path, LabeledGraph, NodeId, Scope};
use crate::lcl::{
    enumerate_solutions, item, Checker, Labeling, LclProblem, Partial, SearchOptions, SolveError, Unknown, Violation,
};

/// Output of Π^badOctopus: ⊥ or an error triple of badTree labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OctOut {
    Bot,
    Error([TreeOut; 3]),
}

impl OctOut {
    /// x_{v,k} (k = 0, 1, 2); ⊥ for a ⊥ output.
    pub fn stage(self, k: usize) -> TreeOut {
        match self {
            OctOut::Bot => TreeOut::Bot,
            OctOut::Error(x) => x[k],
        }
    }

    pub fn is_bot(self) -> bool {
        self == OctOut::Bot
    }

    /// All 344 labels.
    pub fn alphabet() -> Vec<OctOut> {
        let mut a = vec![OctOut::Bot];
        for x in TreeOut::ALL {
            for y in TreeOut::ALL {
                for z in TreeOut::ALL {
                    a.push(OctOut::Error([x, y, z]));
                }
            }
        }
        a
    }
}

/// The graph Π^badOctopus lives on: a node subset (all nodes when `None`)
/// with every edge among them, plus per-node C^octopus verdicts.
pub struct OctContext<'a> {
    pub g: &'a Instance,
    pub nodes: Option<Vec<bool>>,
    pub classes: EdgeClasses,
    /// Does v violate C^octopus inside the scope?
    pub violates: Vec<bool>,
}

impl<'a> OctContext<'a> {
    pub fn new(g: &'a Instance, nodes: Option<Vec<bool>>) -> Self {
        let classes = EdgeClasses::new(g);
        let violates = {
            let sc = Scope { nodes: nodes.as_deref(), edges: None };
            let ts = Scope { nodes: nodes.as_deref(), edges: Some(&classes.internal) };
            g.nodes().map(|v| sc.has_node(v) && !octopus_violations(g, sc, ts, v).is_empty()).collect()
        };
        OctContext { g, nodes, classes, violates }
    }

    pub fn scope(&self) -> Scope<'_> {
        Scope { nodes: self.nodes.as_deref(), edges: None }
    }

    /// Internal edges inside the scope: where the badTree instances run.
    pub fn tree_scope(&self) -> Scope<'_> {
        Scope { nodes: self.nodes.as_deref(), edges: Some(&self.classes.internal) }
    }

    pub fn has_node(&self, v: NodeId) -> bool {
        self.scope().has_node(v)
    }
}

fn or(a: Partial<bool>, b: Partial<bool>) -> Partial<bool> {
    match (a, b) {
        (Ok(true), _) | (_, Ok(true)) => Ok(true),
        (Ok(false), Ok(false)) => Ok(false),
        _ => Err(Unknown),
    }
}

/// Does some half-edge of `v` labeled in `labels` reach a node whose
/// stage-`k` output is not ⊥?
fn linked_error(
    ctx: &OctContext<'_>,
    v: NodeId,
    labels: &[EdgeLabel],
    k: usize,
    out: &dyn Fn(NodeId) -> Partial<OctOut>,
) -> Partial<bool> {
    let mut acc = Ok(false);
    for h in ctx.g.half_edges_in(v, ctx.scope()) {
        if labels.contains(h.here) {
            acc = or(acc, out(h.other).map(|o| !o.stage(k).is_bot()));
        }
    }
    acc
}

/// Stage marks i_{v,1..3}.
pub fn stage_marks(
    ctx: &OctContext<'_>,
    v: NodeId,
    m: Partial<bool>,
    out: &dyn Fn(NodeId) -> Partial<OctOut>,
) -> [Partial<bool>; 3] {
    let kind = *ctx.g.label(v);
    let i1 = or(Ok(ctx.violates[v]), m);
    let head = if kind == NodeKind::Head {
        linked_error(ctx, v, &[EdgeLabel::Hp1, EdgeLabel::Hp2], 0, out)
    } else {
        Ok(false)
    };
    let i2 = or(i1, head);
    let port = if kind == NodeKind::Port { linked_error(ctx, v, &[EdgeLabel::Ph], 1, out) } else { Ok(false) };
    let i3 = or(i2, port);
    [i1, i2, i3]
}

/// C^badOctopus at `v`.
pub fn badoctopus_items(
    ctx: &OctContext<'_>,
    v: NodeId,
    m: Partial<bool>,
    out: &dyn Fn(NodeId) -> Partial<OctOut>,
    tag: &str,
    res: &mut Vec<Violation>,
) {
    if !ctx.has_node(v) {
        return;
    }
    let Ok(o) = out(v) else { return };
    let OctOut::Error(x) = o else { return };
    if x.iter().all(|t| t.is_bot()) {
        res.push(Violation::new(v, format!("{tag}.1"), "error triple is (⊥,⊥,⊥)"));
    }
    let marks = stage_marks(ctx, v, m, out);
    let ts = ctx.tree_scope();
    for k in 0..3 {
        let read = |u: NodeId| out(u).map(|o| o.stage(k));
        item(res, badtree_item(ctx.g, ts, v, marks[k], &read, &format!("{tag}.{}", 3 + 2 * k)));
    }
}

/// The three stage runs plus the combined output and locality.
#[derive(Clone, Debug)]
pub struct OctRun {
    pub out: Vec<OctOut>,
    pub stages: [TreeRun; 3],
    /// Round at which each node fixes its output.
    pub round: Vec<usize>,
    pub end: usize,
}

/// Three-stage solver. Stage k starts at `o_k` (marks known), its pointer
/// rounds end at `e_k = o_k + 2B`, and `o_{k+1} = e_k + 1`.
pub fn run_badoctopus(ctx: &OctContext<'_>, marks: &[bool], o1: usize) -> OctRun {
    let g = ctx.g;
    let n = g.n();
    let b = log_budget(n);
    let ts = ctx.tree_scope();
    let mut outs: Vec<OctOut> = vec![OctOut::Bot; n];
    let mut stages: Vec<TreeRun> = Vec::new();
    let mut start = o1;
    for k in 0..3 {
        let read = |u: NodeId| -> Partial<OctOut> { Ok(outs[u]) };
        let stage_marked: Vec<bool> = g
            .nodes()
            .map(|v| ctx.has_node(v) && stage_marks(ctx, v, Ok(marks[v]), &read)[k] == Ok(true))
            .collect();
        let run = run_badtree_stage(g, ts, &stage_marked, start, 2 * b);
        for v in g.nodes() {
            if !run.out[v].is_bot() {
                let mut x = match outs[v] {
                    OctOut::Bot => [TreeOut::Bot; 3],
                    OctOut::Error(x) => x,
                };
                x[k] = run.out[v];
                outs[v] = OctOut::Error(x);
            }
        }
        start = run.end + 1;
        stages.push(run);
    }
    let stages: [TreeRun; 3] = stages.try_into().unwrap();
    let end = stages[2].end;
    let round = g.nodes().map(|v| stages[2].decided[v].unwrap_or(end)).collect();
    OctRun { out: outs, stages, round, end }
}

/// badTree on one stage: scope, marks and the tree-scope edges are fixed.
struct StageProblem {
    nodes: Option<Vec<bool>>,
    internal: Vec<bool>,
    marks: Vec<bool>,
}

struct StageChecker<'a> {
    p: &'a StageProblem,
    g: &'a Instance,
}

impl StageProblem {
    fn scope(&self) -> Scope<'_> {
        Scope { nodes: self.nodes.as_deref(), edges: Some(&self.internal) }
    }
}

impl Checker<TreeOut> for StageChecker<'_> {
    fn n(&self) -> usize {
        self.g.n()
    }

    fn check_node(&self, out: &Labeling<TreeOut>, v: NodeId) -> Vec<Violation> {
        let sc = self.p.scope();
        let mut res = Vec::new();
        if sc.has_node(v) {
            let read = |u: NodeId| out.node(u).copied().ok_or(Unknown);
            item(&mut res, badtree_item(self.g, sc, v, Ok(self.p.marks[v]), &read, "stage"));
        }
        res
    }

    fn node_candidates(&self, v: NodeId) -> Option<Vec<TreeOut>> {
        let sc = self.p.scope();
        let mut c = vec![TreeOut::Bot];
        if !sc.has_node(v) {
            return Some(c);
        }
        if self.p.marks[v] || !tree_violations(self.g, sc, v).is_empty() {
            c.push(TreeOut::Err);
        }
        for d in Dir::ALL {
            if follow_path(self.g, v, &[d.label()], sc).is_some() {
                c.push(TreeOut::Ptr(d));
            }
        }
        Some(c)
    }
}

impl LclProblem for StageProblem {
    type NodeIn = NodeKind;
    type EdgeIn = EdgeLabel;
    type Out = TreeOut;
    type HalfOut = ();

    fn name(&self) -> String {
        "badtree-stage".into()
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
        Box::new(StageChecker { p: self, g })
    }
}

/// Every valid Π^badOctopus labeling, enumerated stage by stage: stage k
/// reads earlier stages only through its marks, so the solution set is
/// exactly the nested product of the per-stage badTree solution sets.
pub fn enumerate_badoctopus(
    ctx: &OctContext<'_>,
    marks: &[bool],
    opts: &SearchOptions,
) -> Result<Vec<Vec<OctOut>>, SolveError> {
    let mut all = Vec::new();
    let start = vec![[TreeOut::Bot; 3]; ctx.g.n()];
    stage_rec(ctx, marks, opts, 0, start, &mut all)?;
    Ok(all)
}

fn stage_rec(
    ctx: &OctContext<'_>,
    marks: &[bool],
    opts: &SearchOptions,
    k: usize,
    acc: Vec<[TreeOut; 3]>,
    all: &mut Vec<Vec<OctOut>>,
) -> Result<(), SolveError> {
    let g = ctx.g;
    if k == 3 {
        let out =
            acc.iter().map(|x| if x.iter().all(|t| t.is_bot()) { OctOut::Bot } else { OctOut::Error(*x) }).collect();
        all.push(out);
        return Ok(());
    }
    let read = |u: NodeId| -> Partial<OctOut> { Ok(OctOut::Error(acc[u])) };
    let stage_marked =
        g.nodes().map(|v| ctx.has_node(v) && stage_marks(ctx, v, Ok(marks[v]), &read)[k] == Ok(true)).collect();
    let p = StageProblem { nodes: ctx.nodes.clone(), internal: ctx.classes.internal.clone(), marks: stage_marked };
    let sols = enumerate_solutions(&p, g, opts)?;
    for s in sols {
        let vals = s.node_values().unwrap();
        let mut next = acc.clone();
        for v in g.nodes() {
            next[v][k] = vals[v];
        }
        stage_rec(ctx, marks, opts, k + 1, next, all)?;
    }
    Ok(())
}

/// Standalone solver: marks from node inputs, whole graph in scope.
pub fn solve_badoctopus(g: &Instance) -> OctRun {
    let ctx = OctContext::new(g, None);
    let marks: Vec<bool> = g.nodes().map(|v| g.input(v).mark).collect();
    run_badoctopus(&ctx, &marks, TREE_GATHER)
}

pub fn check_badoctopus(g: &Instance, out: &[OctOut]) -> Vec<Violation> {
    let lab = Labeling::from_nodes(out.to_vec(), g.m());
    let res = BadOctopus.checker(g).check_all(&lab);
    res
}

/// Π^badOctopus on (V^octopus, E^octopus)-labeled graphs; m_v is the node
/// input's `mark`.
#[derive(Clone, Copy, Debug, Default)]
pub struct BadOctopus;

struct BadOctopusChecker<'a> {
    ctx: OctContext<'a>,
}

impl Checker<OctOut> for BadOctopusChecker<'_> {
    fn n(&self) -> usize {
        self.ctx.g.n()
    }

    fn check_node(&self, out: &Labeling<OctOut>, v: NodeId) -> Vec<Violation> {
        let read = |u: NodeId| out.node(u).copied().ok_or(Unknown);
        let mut res = Vec::new();
        badoctopus_items(&self.ctx, v, Ok(self.ctx.g.input(v).mark), &read, "badoctopus", &mut res);
        res
    }

    fn node_candidates(&self, v: NodeId) -> Option<Vec<OctOut>> {
        Some(octopus_candidates(&self.ctx, v, self.ctx.g.input(v).mark))
    }
}

/// A sound restriction of the 344 labels at `v`: Err in stage k only where
/// i_{v,k} can be 1, pointers only along existing labeled edges.
pub(crate) fn octopus_candidates(ctx: &OctContext<'_>, v: NodeId, m: bool) -> Vec<OctOut> {
    let g = ctx.g;
    let ts = ctx.tree_scope();
    let kind = *g.label(v);
    let tree_bad = !tree_violations(g, ts, v).is_empty();
    let has = |l: EdgeLabel| g.half_edges_in(v, ctx.scope()).any(|h| *h.here == l);
    let e1 = m || ctx.violates[v] || tree_bad;
    let e2 = e1 || (kind == NodeKind::Head && (has(EdgeLabel::Hp1) || has(EdgeLabel::Hp2)));
    let e3 = e2 || (kind == NodeKind::Port && has(EdgeLabel::Ph));
    let per_stage = |err: bool| {
        let mut c = vec![TreeOut::Bot];
        if err {
            c.push(TreeOut::Err);
        }
        for d in Dir::ALL {
            if follow_path(g, v, &[d.label()], ts).is_some() {
                c.push(TreeOut::Ptr(d));
            }
        }
        c
    };
    let (s1, s2, s3) = (per_stage(e1), per_stage(e2), per_stage(e3));
    let mut out = vec![OctOut::Bot];
    for &x in &s1 {
        for &y in &s2 {
            for &z in &s3 {
                if !(x.is_bot() && y.is_bot() && z.is_bot()) {
                    out.push(OctOut::Error([x, y, z]));
                }
            }
        }
    }
    out
}

impl LclProblem for BadOctopus {
    type NodeIn = NodeKind;
    type EdgeIn = EdgeLabel;
    type Out = OctOut;
    type HalfOut = ();

    fn name(&self) -> String {
        "badoctopus".into()
    }
    fn radius(&self) -> usize {
        4
    }
    fn node_alphabet(&self) -> Vec<OctOut> {
        OctOut::alphabet()
    }
    fn half_alphabet(&self) -> Vec<()> {
        vec![()]
    }
    fn checker<'a>(&'a self, g: &'a LabeledGraph<NodeKind, EdgeLabel>) -> Box<dyn Checker<OctOut> + 'a> {
        Box::new(BadOctopusChecker { ctx: OctContext::new(g, None) })
    }
}
