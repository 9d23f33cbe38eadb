use serde::{Deserialize, Serialize};

use super::badoctopus::{badoctopus_items, octopus_candidates, run_badoctopus, OctContext, OctOut};
use crate::gadgets::{proper_violations, EdgeClasses, EdgeLabel, Instance, NodeKind};
use crate::graph::{LabeledGraph, NodeId};
use crate::lcl::{Checker, Labeling, LclProblem, Partial, Unknown, Violation};

/// Output of Π^badGraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphOut {
    Bot,
    /// (Error_intra, x) with x ≠ ⊥.
    Intra(OctOut),
    Inter1,
    Inter2,
}

impl GraphOut {
    pub fn is_bot(self) -> bool {
        self == GraphOut::Bot
    }

    /// The badOctopus component seen by intra-octopus nodes.
    pub fn octopus(self) -> OctOut {
        match self {
            GraphOut::Intra(x) => x,
            _ => OctOut::Bot,
        }
    }
}

/// Per-graph data every badGraph check needs.
pub struct GraphContext<'a> {
    pub oct: OctContext<'a>,
    /// C^proper fails at v (whole graph).
    pub improper: Vec<bool>,
}

impl<'a> GraphContext<'a> {
    pub fn new(g: &'a Instance) -> Self {
        let classes = EdgeClasses::new(g);
        let improper = g.nodes().map(|v| !proper_violations(g, &classes, None, v).is_empty()).collect();
        GraphContext { oct: OctContext::new(g, Some(intra_mask(g))), improper }
    }
}

/// Non-inter-octopus nodes: the node set badOctopus runs on.
pub fn intra_mask(g: &Instance) -> Vec<bool> {
    g.nodes().map(|v| *g.label(v) != NodeKind::Inter).collect()
}

/// m_v: a neighbor outputs Error_inter1, or v itself violates C^proper.
fn graph_mark(ctx: &GraphContext<'_>, v: NodeId, out: &dyn Fn(NodeId) -> Partial<GraphOut>) -> Partial<bool> {
    if ctx.improper[v] {
        return Ok(true);
    }
    let mut acc = Ok(false);
    for u in ctx.oct.g.neighbors(v) {
        match out(u) {
            Ok(GraphOut::Inter1) => return Ok(true),
            Ok(_) => {}
            Err(Unknown) => acc = Err(Unknown),
        }
    }
    acc
}

/// C^badGraph at `v`.
pub fn badgraph_items(
    ctx: &GraphContext<'_>,
    v: NodeId,
    out: &dyn Fn(NodeId) -> Partial<GraphOut>,
    res: &mut Vec<Violation>,
) {
    let g = ctx.oct.g;
    let Ok(o) = out(v) else { return };
    let inter = *g.label(v) == NodeKind::Inter;
    match o {
        GraphOut::Bot => {}
        GraphOut::Inter1 => {
            if !inter || !ctx.improper[v] {
                res.push(Violation::new(v, "badgraph.inter1", "Error_inter1 needs an inter-octopus node violating C^proper"));
            }
        }
        GraphOut::Inter2 => {
            if !inter {
                res.push(Violation::new(v, "badgraph.inter2", "Error_inter2 on a node that is not inter-octopus"));
            } else if g.neighbors(v).any(|u| out(u) == Ok(GraphOut::Bot)) {
                res.push(Violation::new(v, "badgraph.inter2", "Error_inter2 with a ⊥ neighbor"));
            }
        }
        GraphOut::Intra(x) => {
            if inter {
                res.push(Violation::new(v, "badgraph.intra", "Error_intra on an inter-octopus node"));
                return;
            }
            if x.is_bot() {
                res.push(Violation::new(v, "badgraph.intra.1", "Error_intra carries ⊥"));
            }
            let read = |u: NodeId| out(u).map(GraphOut::octopus);
            badoctopus_items(&ctx.oct, v, graph_mark(ctx, v, out), &read, "badgraph.intra.2", res);
        }
    }
}

pub const PROPER_GATHER: usize = 3;

#[derive(Clone, Debug)]
pub struct GraphRun {
    pub out: Vec<GraphOut>,
    /// Round at which each node fixes its output.
    pub round: Vec<usize>,
    pub end: usize,
}

/// Error_inter1 at round 3, marks at round 4, the three badOctopus stages
/// on the intra-octopus nodes, then Error_inter2 one round later.
pub fn solve_badgraph(g: &Instance) -> GraphRun {
    let ctx = GraphContext::new(g);
    let intra = intra_mask(g);
    let mut out = vec![GraphOut::Bot; g.n()];
    for v in g.nodes() {
        if !intra[v] && ctx.improper[v] {
            out[v] = GraphOut::Inter1;
        }
    }
    let marks: Vec<bool> = g
        .nodes()
        .map(|v| intra[v] && graph_mark(&ctx, v, &|u| Ok(out[u])) == Ok(true))
        .collect();
    let oct = run_badoctopus(&ctx.oct, &marks, PROPER_GATHER + 1);
    for v in g.nodes() {
        if intra[v] && !oct.out[v].is_bot() {
            out[v] = GraphOut::Intra(oct.out[v]);
        }
    }
    let end = oct.end + 1;
    let mut round = vec![end; g.n()];
    for v in g.nodes() {
        if intra[v] {
            round[v] = oct.round[v];
        } else if out[v] == GraphOut::Inter1 {
            round[v] = PROPER_GATHER;
        } else if g.degree(v) > 0 && g.neighbors(v).all(|u| !out[u].is_bot()) {
            out[v] = GraphOut::Inter2;
        }
    }
    GraphRun { out, round, end }
}

pub fn check_badgraph(g: &Instance, out: &[GraphOut]) -> Vec<Violation> {
    let lab = Labeling::from_nodes(out.to_vec(), g.m());
    let res = BadGraph.checker(g).check_all(&lab);
    res
}

/// Subgraph induced by the nodes outputting ⊥, with the map back to `g`.
pub fn bot_subgraph(g: &Instance, out: &[GraphOut]) -> (Instance, Vec<NodeId>) {
    let keep: Vec<NodeId> = g.nodes().filter(|&v| out[v].is_bot()).collect();
    g.induced(&keep)
}

/// Π^badGraph on (V^proper, E^proper)-labeled graphs.
#[derive(Clone, Copy, Debug, Default)]
pub struct BadGraph;

struct BadGraphChecker<'a> {
    ctx: GraphContext<'a>,
}

impl Checker<GraphOut> for BadGraphChecker<'_> {
    fn n(&self) -> usize {
        self.ctx.oct.g.n()
    }

    fn check_node(&self, out: &Labeling<GraphOut>, v: NodeId) -> Vec<Violation> {
        let read = |u: NodeId| out.node(u).copied().ok_or(Unknown);
        let mut res = Vec::new();
        badgraph_items(&self.ctx, v, &read, &mut res);
        res
    }

    fn node_candidates(&self, v: NodeId) -> Option<Vec<GraphOut>> {
        let g = self.ctx.oct.g;
        let mut c = vec![GraphOut::Bot];
        if *g.label(v) == NodeKind::Inter {
            if self.ctx.improper[v] {
                c.push(GraphOut::Inter1);
            }
            if g.degree(v) > 0 {
                c.push(GraphOut::Inter2);
            }
        } else {
            let may_mark = self.ctx.improper[v]
                || g.neighbors(v).any(|u| *g.label(u) == NodeKind::Inter && self.ctx.improper[u]);
            c.extend(
                octopus_candidates(&self.ctx.oct, v, may_mark).into_iter().filter(|x| !x.is_bot()).map(GraphOut::Intra),
            );
        }
        Some(c)
    }
}

impl LclProblem for BadGraph {
    type NodeIn = NodeKind;
    type EdgeIn = EdgeLabel;
    type Out = GraphOut;
    type HalfOut = ();

    fn name(&self) -> String {
        "badgraph".into()
    }
    fn radius(&self) -> usize {
        5
    }
    fn node_alphabet(&self) -> Vec<GraphOut> {
        let mut a = vec![GraphOut::Bot, GraphOut::Inter1, GraphOut::Inter2];
        a.extend(OctOut::alphabet().into_iter().filter(|x| !x.is_bot()).map(GraphOut::Intra));
        a
    }
    fn half_alphabet(&self) -> Vec<()> {
        vec![()]
    }
    fn checker<'a>(&'a self, g: &'a LabeledGraph<NodeKind, EdgeLabel>) -> Box<dyn Checker<GraphOut> + 'a> {
        Box::new(BadGraphChecker { ctx: GraphContext::new(g) })
    }
}
