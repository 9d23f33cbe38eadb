use std::collections::BTreeSet;
use std::marker::PhantomData;

use rand_chacha::ChaCha8Rng;

use super::{Knowledge, NodeCtx, NodeProgram, Outbox};
use crate::detectors::{log_budget, run_badtree_stage, TreeOut, TREE_GATHER};
use crate::gadgets::{EdgeLabel, NodeKind};
use crate::graph::{Scope, View};

/// Decides in round 0 from x(v) and its private coins.
pub struct ConstantProgram<F>(pub F);

impl<N, E, O: Clone, F> NodeProgram<N, E> for ConstantProgram<F>
where
    F: Fn(&NodeCtx<'_, N, E>, &mut ChaCha8Rng) -> O,
{
    type State = ();
    type Msg = ();
    type Out = O;

    fn init(&self, ctx: &NodeCtx<'_, N, E>, rng: &mut ChaCha8Rng) -> ((), Option<O>) {
        ((), Some((self.0)(ctx, rng)))
    }

    fn send(&self, _: &NodeCtx<'_, N, E>, _: &(), _: usize) -> Outbox<()> {
        Outbox::Silent
    }

    fn receive(&self, _: &NodeCtx<'_, N, E>, _: &mut (), _: usize, _: &[Option<()>], _: &mut ChaCha8Rng) -> Option<O> {
        None
    }
}

/// Floods identifiers; a node stops once it has heard of all n nodes and
/// outputs the largest identifier. On a connected graph node v stops after
/// ecc(v) rounds.
pub struct FloodProgram;

impl<N, E> NodeProgram<N, E> for FloodProgram {
    type State = BTreeSet<u64>;
    type Msg = BTreeSet<u64>;
    type Out = u64;

    fn init(&self, ctx: &NodeCtx<'_, N, E>, _: &mut ChaCha8Rng) -> (Self::State, Option<u64>) {
        let s = BTreeSet::from([ctx.input.ident]);
        let done = (ctx.n == 1).then_some(ctx.input.ident);
        (s, done)
    }

    fn send(&self, _: &NodeCtx<'_, N, E>, s: &Self::State, _: usize) -> Outbox<Self::Msg> {
        Outbox::All(s.clone())
    }

    fn receive(
        &self,
        ctx: &NodeCtx<'_, N, E>,
        s: &mut Self::State,
        _: usize,
        inbox: &[Option<Self::Msg>],
        _: &mut ChaCha8Rng,
    ) -> Option<u64> {
        for m in inbox.iter().flatten() {
            s.extend(m);
        }
        (s.len() == ctx.n).then(|| *s.last().unwrap())
    }

    fn msg_size(&self, m: &Self::Msg) -> usize {
        m.len()
    }
}

/// Gathers the radius-T view for T rounds, then applies `f` to it. The
/// message-passing twin of `run_as_view_function` with constant radius.
pub struct GatherProgram<N, E, F> {
    pub radius: usize,
    pub seed: u64,
    pub f: F,
    _p: PhantomData<fn(N, E)>,
}

impl<N, E, F> GatherProgram<N, E, F> {
    pub fn new(radius: usize, seed: u64, f: F) -> Self {
        GatherProgram { radius, seed, f, _p: PhantomData }
    }
}

impl<N: Clone, E: Clone, O: Clone, F> NodeProgram<N, E> for GatherProgram<N, E, F>
where
    F: Fn(&View<N, E>, u64) -> O,
{
    type State = Knowledge<N, E>;
    type Msg = Knowledge<N, E>;
    type Out = O;

    fn init(&self, ctx: &NodeCtx<'_, N, E>, _: &mut ChaCha8Rng) -> (Self::State, Option<O>) {
        let k = Knowledge::own(ctx);
        let out = (self.radius == 0).then(|| (self.f)(&k.view(ctx.node, 0), self.seed));
        (k, out)
    }

    fn send(&self, _: &NodeCtx<'_, N, E>, k: &Self::State, _: usize) -> Outbox<Self::Msg> {
        Outbox::All(k.clone())
    }

    fn receive(
        &self,
        ctx: &NodeCtx<'_, N, E>,
        k: &mut Self::State,
        round: usize,
        inbox: &[Option<Self::Msg>],
        _: &mut ChaCha8Rng,
    ) -> Option<O> {
        for m in inbox.iter().flatten() {
            k.merge(m);
        }
        (round >= self.radius).then(|| (self.f)(&k.view(ctx.node, self.radius), self.seed))
    }

    fn msg_size(&self, m: &Self::Msg) -> usize {
        m.size()
    }
}

/// Π^badTree as a message-passing program. In round t a node replays the
/// event-driven solver on its radius-t view and commits as soon as its own
/// decision round is at most t; the rest settle on ⊥ at the budget.
pub struct BadTreeProgram;

impl NodeProgram<NodeKind, EdgeLabel> for BadTreeProgram {
    type State = Knowledge<NodeKind, EdgeLabel>;
    type Msg = Knowledge<NodeKind, EdgeLabel>;
    type Out = TreeOut;

    fn init(&self, ctx: &NodeCtx<'_, NodeKind, EdgeLabel>, _: &mut ChaCha8Rng) -> (Self::State, Option<TreeOut>) {
        (Knowledge::own(ctx), None)
    }

    fn send(&self, _: &NodeCtx<'_, NodeKind, EdgeLabel>, k: &Self::State, _: usize) -> Outbox<Self::Msg> {
        Outbox::All(k.clone())
    }

    fn receive(
        &self,
        ctx: &NodeCtx<'_, NodeKind, EdgeLabel>,
        k: &mut Self::State,
        round: usize,
        inbox: &[Option<Self::Msg>],
        _: &mut ChaCha8Rng,
    ) -> Option<TreeOut> {
        for m in inbox.iter().flatten() {
            k.merge(m);
        }
        if round < TREE_GATHER {
            return None;
        }
        let budget = 2 * log_budget(ctx.n);
        let w = k.view(ctx.node, round);
        let marked: Vec<bool> = w.graph.nodes().map(|v| w.graph.input(v).mark).collect();
        let run = run_badtree_stage(&w.graph, Scope::FULL, &marked, TREE_GATHER, budget);
        let c = w.local(ctx.node).expect("center is in its view");
        match run.decided[c] {
            Some(r) if r <= round => Some(run.out[c]),
            _ if round >= TREE_GATHER + budget => Some(TreeOut::Bot),
            _ => None,
        }
    }

    fn msg_size(&self, m: &Self::Msg) -> usize {
        m.size()
    }
}
