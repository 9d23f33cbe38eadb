use std::fmt::{self, Debug, Display};

use serde::{Deserialize, Serialize};

use super::iterghz::{bits_to_labels, GhzLabel};
use super::linearizable::LinearizableProblem;
use super::promise::{linearizable_to_promise, promise_clean, promise_items, PROMISE_RADIUS};
use super::quantum::{quantum_solve_iterghz, ITERGHZ_ROUNDS};
use crate::detectors::{
    badgraph_items, bot_subgraph, check_badgraph, solve_badgraph, BadGraph, GraphContext, GraphOut, PROPER_GATHER,
};
use crate::gadgets::{compress, proper_violations, EdgeClasses, EdgeLabel, Instance, LiftError, NodeKind};
use crate::graph::{bfs, components, LabeledGraph, NodeId, Scope};
use crate::lcl::{Checker, Labeling, LclProblem, Unknown, Violation};

/// Output of Π: a non-⊥ badGraph label, or a promise label (⊥ or Σ).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PiOut<S> {
    Bad(GraphOut),
    Promise(Option<S>),
}

impl<S> PiOut<S> {
    /// The badGraph projection: promise labels read as ⊥.
    pub fn graph(&self) -> GraphOut {
        match self {
            PiOut::Bad(x) => *x,
            PiOut::Promise(_) => GraphOut::Bot,
        }
    }

    pub fn is_promise(&self) -> bool {
        matches!(self, PiOut::Promise(_))
    }
}

impl<S: Display> Display for PiOut<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PiOut::Bad(x) => write!(f, "(badGraph,{x:?})"),
            PiOut::Promise(None) => write!(f, "(promise,⊥)"),
            PiOut::Promise(Some(s)) => write!(f, "(promise,{s})"),
        }
    }
}

/// Radius of C^Π: promise items plus the C^proper gather behind them.
pub const PI_RADIUS: usize = PROMISE_RADIUS + PROPER_GATHER;

/// C^Π on a total labeling.
pub fn check_pi<S: Ord + Clone + Debug>(g: &Instance, p: &LinearizableProblem<S>, out: &[PiOut<S>]) -> Vec<Violation> {
    let proj: Vec<GraphOut> = out.iter().map(PiOut::graph).collect();
    let mut res = check_badgraph(g, &proj);
    let member: Vec<bool> = out.iter().map(PiOut::is_promise).collect();
    let classes = EdgeClasses::new(g);
    let clean = promise_clean(g, &classes, Some(&member));
    let scope = Scope::nodes(&member);
    let read = |u: NodeId| match &out[u] {
        PiOut::Promise(x) => Ok(x.clone()),
        PiOut::Bad(_) => Err(Unknown),
    };
    for v in g.nodes().filter(|&v| clean[v]) {
        res.extend(promise_items(g, p, scope, v, read));
    }
    res
}

/// Π built on a linearizable problem.
#[derive(Clone, Debug)]
pub struct Pi<S: Ord> {
    pub problem: LinearizableProblem<S>,
}

struct PiChecker<'a, S: Ord> {
    p: &'a LinearizableProblem<S>,
    ctx: GraphContext<'a>,
    classes: EdgeClasses,
    /// The whole component satisfies C^proper, so badGraph is ⊥ there in
    /// every valid solution and the promise items bind.
    forced: Vec<bool>,
}

impl<S: Ord + Clone + Debug> Checker<PiOut<S>> for PiChecker<'_, S> {
    fn n(&self) -> usize {
        self.ctx.oct.g.n()
    }

    fn check_node(&self, out: &Labeling<PiOut<S>>, v: NodeId) -> Vec<Violation> {
        let g = self.ctx.oct.g;
        let mut res = Vec::new();
        let graph = |u: NodeId| out.node(u).map(PiOut::graph).ok_or(Unknown);
        badgraph_items(&self.ctx, v, &graph, &mut res);
        if !matches!(out.node(v), Some(PiOut::Promise(_))) {
            return res;
        }
        let near = bfs(g, &[v], Some(PI_RADIUS), Scope::FULL);
        let mut member = vec![false; g.n()];
        for u in g.nodes() {
            match out.node(u) {
                Some(o) => member[u] = o.is_promise(),
                None if self.forced[u] => member[u] = true,
                None if near[u] <= PI_RADIUS => return res,
                None => {}
            }
        }
        let scope = Scope::nodes(&member);
        let ball = bfs(g, &[v], Some(PROMISE_RADIUS), scope);
        if g.nodes().any(|u| ball[u] <= PROMISE_RADIUS && !proper_violations(g, &self.classes, Some(&member), u).is_empty()) {
            return res;
        }
        let read = |u: NodeId| match out.node(u) {
            Some(PiOut::Promise(x)) => Ok(x.clone()),
            _ => Err(Unknown),
        };
        res.extend(promise_items(g, self.p, scope, v, read));
        res
    }

    fn node_candidates(&self, v: NodeId) -> Option<Vec<PiOut<S>>> {
        let g = self.ctx.oct.g;
        let promise = self.p.sigma.iter().cloned().map(|s| PiOut::Promise(Some(s)));
        if self.forced[v] {
            return Some(if *g.label(v) == NodeKind::Port { promise.collect() } else { vec![PiOut::Promise(None)] });
        }
        let bad = BadGraph.checker(g).node_candidates(v)?;
        let mut c: Vec<PiOut<S>> = bad.into_iter().filter(|x| !x.is_bot()).map(PiOut::Bad).collect();
        c.push(PiOut::Promise(None));
        c.extend(promise);
        Some(c)
    }
}

impl<S: Ord + Clone + Debug> LclProblem for Pi<S> {
    type NodeIn = NodeKind;
    type EdgeIn = EdgeLabel;
    type Out = PiOut<S>;
    type HalfOut = ();

    fn name(&self) -> String {
        "pi".into()
    }
    fn radius(&self) -> usize {
        PI_RADIUS.max(BadGraph.radius())
    }
    fn node_alphabet(&self) -> Vec<PiOut<S>> {
        let mut a: Vec<PiOut<S>> =
            BadGraph.node_alphabet().into_iter().filter(|x| !x.is_bot()).map(PiOut::Bad).collect();
        a.push(PiOut::Promise(None));
        a.extend(self.problem.sigma.iter().cloned().map(|s| PiOut::Promise(Some(s))));
        a
    }
    fn half_alphabet(&self) -> Vec<()> {
        vec![()]
    }
    fn checker<'a>(&'a self, g: &'a LabeledGraph<NodeKind, EdgeLabel>) -> Box<dyn Checker<PiOut<S>> + 'a> {
        let ctx = GraphContext::new(g);
        let (comp, k) = components(g, Scope::FULL);
        let mut broken = vec![false; k];
        for v in g.nodes() {
            if ctx.improper[v] {
                broken[comp[v]] = true;
            }
        }
        let forced = g.nodes().map(|v| !broken[comp[v]]).collect();
        Box::new(PiChecker { p: &self.problem, ctx, classes: EdgeClasses::new(g), forced })
    }
}

/// Result of the quantum pipeline for Π over iterated GHZ.
#[derive(Clone, Debug, Serialize)]
pub struct PiRun {
    pub out: Vec<PiOut<GhzLabel>>,
    /// Round at which each node fixes its output.
    pub round: Vec<usize>,
    pub badgraph_end: usize,
    /// Largest head-root eccentricity over the octopi of G'.
    pub octopus_radius: usize,
    pub locality: usize,
    pub norm_drift: f64,
}

/// Eccentricity of each head root inside its octopus, maximized.
fn max_root_eccentricity(g: &Instance) -> usize {
    let classes = EdgeClasses::new(g);
    let scope = Scope::edges(&classes.intra);
    let roots: Vec<NodeId> = g
        .nodes()
        .filter(|&v| *g.label(v) == NodeKind::Head && !g.half_edges(v).any(|h| *h.here == EdgeLabel::P))
        .collect();
    let mut best = 0;
    for r in roots {
        let d = bfs(g, &[r], None, scope);
        best = best.max(d.into_iter().filter(|&x| x != usize::MAX).max().unwrap_or(0));
    }
    best
}

/// badGraph classically; then on the ⊥-induced proper instance G' each
/// head root runs its white node of the compressed graph. One simulated
/// round costs 2(D + 1) rounds (root to inter node and back) and the final
/// spread to the port gadgets costs D, where D bounds the distance from a
/// head root to any node of its octopus.
pub fn solve_pi(g: &Instance, seed: u64) -> Result<PiRun, LiftError> {
    let run = solve_badgraph(g);
    let mut out: Vec<PiOut<GhzLabel>> = run.out.iter().map(|&x| PiOut::Bad(x)).collect();
    let mut round = run.round.clone();
    let (sub, map) = bot_subgraph(g, &run.out);
    let mut radius = 0;
    let mut locality = run.round.iter().copied().max().unwrap_or(0);
    let mut drift = 0.0;
    if sub.n() > 0 {
        let (b, comp) = compress(&sub)?;
        let q = quantum_solve_iterghz(&b, seed);
        drift = q.norm_drift;
        let labels = linearizable_to_promise(&comp, &bits_to_labels(&b, &q.out));
        radius = max_root_eccentricity(&sub);
        let done = run.end + ITERGHZ_ROUNDS * 2 * (radius + 1) + radius;
        for (i, &v) in map.iter().enumerate() {
            out[v] = PiOut::Promise(labels[i]);
            round[v] = done;
        }
        locality = locality.max(done);
    }
    Ok(PiRun { out, round, badgraph_end: run.end, octopus_radius: radius, locality, norm_drift: drift })
}
