use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::outcome::{draw, Enumerable, Law};
use crate::graph::{bfs, LabeledGraph, NodeId, Scope};

/// Component of `v` in the open induced subgraph on N_T[revealed].
fn run_component<N, E>(g: &LabeledGraph<N, E>, revealed: &[NodeId], t: usize, v: NodeId) -> Vec<bool> {
    let dist = bfs(g, revealed, Some(t), Scope::FULL);
    let mut comp = vec![false; g.n()];
    comp[v] = true;
    let mut stack = vec![v];
    while let Some(x) = stack.pop() {
        for h in g.half_edges(x) {
            let y = h.other;
            if dist[y] > t || comp[y] || (dist[x] == t && dist[y] == t) {
                continue;
            }
            comp[y] = true;
            stack.push(y);
        }
    }
    comp
}

/// The conditional law of the next reveal given earlier commitments in
/// its current component.
fn next_law<N, E, L: Clone + Ord>(
    g: &LabeledGraph<N, E>,
    law: &Law<L>,
    t: usize,
    order: &[NodeId],
    done: &[L],
) -> BTreeMap<L, u64> {
    let i = done.len();
    let v = order[i];
    let comp = run_component(g, &order[..=i], t, v);
    let fixed: Vec<(NodeId, L)> =
        order[..i].iter().zip(done).filter(|(w, _)| comp[**w]).map(|(&w, l)| (w, l.clone())).collect();
    law.conditional(&fixed, v)
}

/// Component-wise online simulation of an enumerable outcome: each
/// revealed node samples from the outcome's marginal conditioned on the
/// labels already committed in its component of the partial run. Returns
/// the label of each reveal, in reveal order.
pub fn online_adapter<N, E, O: Enumerable<N, E>>(
    outcome: &O,
    g: &LabeledGraph<N, E>,
    order: &[NodeId],
    seed: u64,
) -> Vec<O::Label> {
    let law = outcome.law(g);
    let t = outcome.locality(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = Vec::with_capacity(order.len());
    for _ in order {
        let m = next_law(g, &law, t, order, &done);
        done.push(draw(&m, &mut rng));
    }
    done
}

/// Exact law of `online_adapter` over reveal-ordered label vectors.
pub fn online_law<N, E, O: Enumerable<N, E>>(
    outcome: &O,
    g: &LabeledGraph<N, E>,
    order: &[NodeId],
) -> BTreeMap<Vec<O::Label>, f64> {
    let law = outcome.law(g);
    let t = outcome.locality(g);
    let mut res = BTreeMap::new();
    let mut stack: Vec<(Vec<O::Label>, f64)> = vec![(Vec::new(), 1.0)];
    while let Some((done, p)) = stack.pop() {
        if done.len() == order.len() {
            *res.entry(done).or_insert(0.0) += p;
            continue;
        }
        let m = next_law(g, &law, t, order, &done);
        let total: u64 = m.values().sum();
        for (l, w) in m {
            let mut d = done.clone();
            d.push(l);
            stack.push((d, p * w as f64 / total as f64));
        }
    }
    res
}
