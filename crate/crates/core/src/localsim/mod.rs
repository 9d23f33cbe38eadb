//! Synchronous LOCAL runtime: message-passing rounds, keyed per-node
//! randomness, taint-tracked view radius, and a view-function mode.

mod knowledge;
mod programs;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{bfs, view, EdgeId, LabeledGraph, NodeId, NodeInput, Scope, View};

pub use knowledge::Knowledge;
pub use programs::{BadTreeProgram, ConstantProgram, FloodProgram, GatherProgram};

/// The private stream of `node` in `round`. Each round owns a disjoint
/// 2^32-word window of the node's stream, so a rerun with more rounds
/// reproduces every earlier round exactly.
pub fn node_rng(seed: u64, node: NodeId, round: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(node as u64);
    r.set_word_pos((round as u128) << 32);
    r
}

/// One port as the node sees it.
#[derive(Clone, Copy, Debug)]
pub struct Port<'a, E> {
    pub edge: EdgeId,
    pub neighbor: NodeId,
    pub here: &'a E,
    pub there: &'a E,
    /// This node is the edge's first endpoint in storage order.
    pub first: bool,
}

/// What a node knows before the first round.
#[derive(Clone, Debug)]
pub struct NodeCtx<'a, N, E> {
    pub node: NodeId,
    pub n: usize,
    pub id_exponent: u32,
    pub label: &'a N,
    pub input: &'a NodeInput,
    pub ports: Vec<Port<'a, E>>,
}

#[derive(Clone, Debug)]
pub enum Outbox<M> {
    Silent,
    All(M),
    /// One optional message per port.
    Ports(Vec<Option<M>>),
}

pub trait NodeProgram<N, E> {
    type State: Clone;
    type Msg: Clone;
    type Out: Clone;

    /// Initial state from x(v); an output here is a 0-round decision.
    fn init(&self, ctx: &NodeCtx<'_, N, E>, rng: &mut ChaCha8Rng) -> (Self::State, Option<Self::Out>);

    fn send(&self, ctx: &NodeCtx<'_, N, E>, state: &Self::State, round: usize) -> Outbox<Self::Msg>;

    /// Transition on the round's inbox (indexed by port).
    fn receive(
        &self,
        ctx: &NodeCtx<'_, N, E>,
        state: &mut Self::State,
        round: usize,
        inbox: &[Option<Self::Msg>],
        rng: &mut ChaCha8Rng,
    ) -> Option<Self::Out>;

    /// Units charged against the memory budget per message.
    fn msg_size(&self, _m: &Self::Msg) -> usize {
        1
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunConfig {
    pub max_rounds: usize,
    /// Cap on message units in flight in one round.
    pub memory_budget: Option<usize>,
}

impl RunConfig {
    pub fn rounds(max_rounds: usize) -> Self {
        RunConfig { max_rounds, memory_budget: None }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("{undecided} nodes still undecided after {rounds} rounds")]
    MaxRounds { rounds: usize, undecided: usize },
    #[error("round {round} put {used} message units in flight, over the budget of {budget}")]
    MemoryBudget { round: usize, used: usize, budget: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct RunTrace<O> {
    pub rounds: usize,
    pub output: Vec<O>,
    /// Round in which each node produced its output.
    pub decided: Vec<usize>,
    /// Largest distance from which information reached each output.
    pub radius: Vec<usize>,
}

impl<O> RunTrace<O> {
    /// `hist[r]` = number of nodes with radius r.
    pub fn radius_histogram(&self) -> Vec<usize> {
        let mut h = vec![0; self.radius.iter().copied().max().map_or(0, |m| m + 1)];
        for &r in &self.radius {
            h[r] += 1;
        }
        h
    }

    pub fn max_radius(&self) -> usize {
        self.radius.iter().copied().max().unwrap_or(0)
    }
}

pub fn contexts<N, E>(g: &LabeledGraph<N, E>) -> Vec<NodeCtx<'_, N, E>> {
    g.nodes()
        .map(|v| NodeCtx {
            node: v,
            n: g.n(),
            id_exponent: g.id_exponent(),
            label: g.label(v),
            input: g.input(v),
            ports: g
                .half_edges(v)
                .map(|h| Port { edge: h.edge, neighbor: h.other, here: h.here, there: h.there, first: g.edge(h.edge).u == v })
                .collect(),
        })
        .collect()
}

/// Bitset of origin nodes.
#[derive(Clone)]
struct Taint(Vec<u64>);

impl Taint {
    fn single(n: usize, v: NodeId) -> Self {
        let mut b = vec![0u64; n.div_ceil(64)];
        b[v / 64] |= 1 << (v % 64);
        Taint(b)
    }

    fn absorb(&mut self, o: &Taint) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a |= b;
        }
    }

    fn contains(&self, v: NodeId) -> bool {
        self.0[v / 64] >> (v % 64) & 1 == 1
    }
}

fn taint_radius<N, E>(g: &LabeledGraph<N, E>, v: NodeId, t: &Taint) -> usize {
    let d = bfs(g, &[v], None, Scope::FULL);
    g.nodes().filter(|&u| t.contains(u)).map(|u| d[u]).max().unwrap_or(0)
}

/// Runs `program` in synchronous rounds until every node has an output.
/// Decided nodes keep sending from their frozen state but no longer
/// receive.
pub fn run_sync<N, E, P: NodeProgram<N, E>>(
    g: &LabeledGraph<N, E>,
    program: &P,
    seed: u64,
    cfg: RunConfig,
) -> Result<RunTrace<P::Out>, SimError> {
    let n = g.n();
    let ctxs = contexts(g);
    let mut states = Vec::with_capacity(n);
    let mut output: Vec<Option<P::Out>> = Vec::with_capacity(n);
    let mut decided = vec![0usize; n];
    let mut taint: Vec<Taint> = (0..n).map(|v| Taint::single(n, v)).collect();
    let mut radius = vec![0usize; n];
    for ctx in &ctxs {
        let (s, o) = program.init(ctx, &mut node_rng(seed, ctx.node, 0));
        states.push(s);
        output.push(o);
    }
    let mut round = 0;
    while output.iter().any(Option::is_none) {
        if round >= cfg.max_rounds {
            return Err(SimError::MaxRounds { rounds: round, undecided: output.iter().filter(|o| o.is_none()).count() });
        }
        round += 1;
        let mut inbox: Vec<Vec<Option<P::Msg>>> = ctxs.iter().map(|c| vec![None; c.ports.len()]).collect();
        let mut fresh = taint.clone();
        let mut used = 0;
        for ctx in &ctxs {
            let u = ctx.node;
            let msgs: Vec<Option<P::Msg>> = match program.send(ctx, &states[u], round) {
                Outbox::Silent => continue,
                Outbox::All(m) => vec![Some(m); ctx.ports.len()],
                Outbox::Ports(ms) => ms,
            };
            for (port, m) in ctx.ports.iter().zip(msgs) {
                let Some(m) = m else { continue };
                used += program.msg_size(&m);
                let v = port.neighbor;
                if output[v].is_some() {
                    continue;
                }
                let back = ctxs[v].ports.iter().position(|p| p.edge == port.edge).expect("edge is incident");
                inbox[v][back] = Some(m);
                fresh[v].absorb(&taint[u]);
            }
        }
        if let Some(budget) = cfg.memory_budget {
            if used > budget {
                return Err(SimError::MemoryBudget { round, used, budget });
            }
        }
        taint = fresh;
        for ctx in &ctxs {
            let v = ctx.node;
            if output[v].is_some() {
                continue;
            }
            let mut rng = node_rng(seed, v, round);
            if let Some(o) = program.receive(ctx, &mut states[v], round, &inbox[v], &mut rng) {
                output[v] = Some(o);
                decided[v] = round;
                radius[v] = taint_radius(g, v, &taint[v]);
            }
        }
    }
    let output = output.into_iter().map(|o| o.expect("all decided")).collect();
    Ok(RunTrace { rounds: round, output, decided, radius })
}

/// Executes an algorithm given as a function of radius-T views: node v
/// outputs `output_fn(view(g, v, radius_fn(v)), seed)`. Randomness of any
/// node in the view is available as `node_rng(seed, global id, 0)`.
pub fn run_as_view_function<N: Clone, E: Clone, O>(
    g: &LabeledGraph<N, E>,
    radius_fn: impl Fn(NodeId) -> usize,
    output_fn: impl Fn(&View<N, E>, u64) -> O,
    seed: u64,
) -> RunTrace<O> {
    let mut output = Vec::with_capacity(g.n());
    let mut radius = Vec::with_capacity(g.n());
    for v in g.nodes() {
        let t = radius_fn(v);
        output.push(output_fn(&view(g, &[v], t), seed));
        radius.push(t);
    }
    RunTrace { rounds: radius.iter().copied().max().unwrap_or(0), output, decided: radius.clone(), radius }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn rng_is_reproducible_and_round_keyed() {
        let a: Vec<u64> = (0..4).map(|_| node_rng(1, 3, 2).gen()).collect();
        let b: Vec<u64> = (0..4).map(|_| node_rng(1, 3, 2).gen()).collect();
        assert_eq!(a, b);
        let mut r = node_rng(1, 3, 2);
        let mut s = node_rng(1, 3, 3);
        assert_ne!(r.gen::<u64>(), s.gen::<u64>());
        assert_ne!(node_rng(1, 3, 0).gen::<u64>(), node_rng(1, 4, 0).gen::<u64>());
    }

    #[test]
    fn taint_bits() {
        let mut t = Taint::single(130, 129);
        t.absorb(&Taint::single(130, 3));
        assert!(t.contains(129) && t.contains(3) && !t.contains(4));
    }
}
