use std::collections::BTreeMap;
use std::fmt::Debug;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gadgets::{EdgeLabel, Instance, NodeKind};
use crate::ghz::{solve_pi, GhzLabel, PiOut};
use crate::graph::{ball, LabeledGraph, NodeId};

/// Independent child seed number `k` of `seed`.
pub fn sub_seed(seed: u64, k: u64) -> u64 {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(k);
    r.next_u64()
}

/// A map from input networks to labeling distributions, accessed through
/// a sampler.
pub trait Outcome<N, E> {
    type Label: Clone + Ord + Debug;

    /// T(n): the distance beyond which the outcome is non-signaling.
    fn locality(&self, g: &LabeledGraph<N, E>) -> usize;

    /// p(n).
    fn success_probability(&self, _n: usize) -> f64 {
        1.0
    }

    fn sample(&self, g: &LabeledGraph<N, E>, seed: u64) -> Vec<Self::Label>;

    /// A sample of the restriction to `nodes`.
    fn sample_on(&self, g: &LabeledGraph<N, E>, nodes: &[NodeId], seed: u64) -> Vec<Self::Label> {
        let s = self.sample(g, seed);
        nodes.iter().map(|&v| s[v].clone()).collect()
    }
}

/// Outcomes whose full law on a given graph can be listed.
pub trait Enumerable<N, E>: Outcome<N, E> {
    fn law(&self, g: &LabeledGraph<N, E>) -> Law<Self::Label>;
}

/// A finite distribution over node labelings with integer weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Law<L> {
    pub rows: BTreeMap<Vec<L>, u64>,
    pub total: u64,
}

impl<L: Clone + Ord> Law<L> {
    pub fn from_rows(rows: impl IntoIterator<Item = (Vec<L>, u64)>) -> Self {
        let mut m = BTreeMap::new();
        let mut total = 0;
        for (r, w) in rows {
            if w > 0 {
                *m.entry(r).or_insert(0) += w;
                total += w;
            }
        }
        assert!(total > 0, "empty law");
        Law { rows: m, total }
    }

    /// O[S]: weights of the restrictions to `nodes` (same total).
    pub fn marginal(&self, nodes: &[NodeId]) -> BTreeMap<Vec<L>, u64> {
        let mut m = BTreeMap::new();
        for (r, &w) in &self.rows {
            *m.entry(nodes.iter().map(|&v| r[v].clone()).collect()).or_insert(0) += w;
        }
        m
    }

    /// Weights of each label at `target` among rows agreeing with `fixed`.
    pub fn conditional(&self, fixed: &[(NodeId, L)], target: NodeId) -> BTreeMap<L, u64> {
        let mut m = BTreeMap::new();
        for (r, &w) in &self.rows {
            if fixed.iter().all(|(v, l)| r[*v] == *l) {
                *m.entry(r[target].clone()).or_insert(0) += w;
            }
        }
        m
    }

    pub fn sample_row<R: Rng>(&self, rng: &mut R) -> &[L] {
        let mut x = rng.gen_range(0..self.total);
        for (r, &w) in &self.rows {
            if x < w {
                return r;
            }
            x -= w;
        }
        unreachable!()
    }
}

/// Draws a key with probability proportional to its weight.
pub(crate) fn draw<K: Clone, R: Rng>(m: &BTreeMap<K, u64>, rng: &mut R) -> K {
    let total: u64 = m.values().sum();
    assert!(total > 0, "conditioning on an event of probability 0");
    let mut x = rng.gen_range(0..total);
    for (k, &w) in m {
        if x < w {
            return k.clone();
        }
        x -= w;
    }
    unreachable!()
}

/// An explicit law for one fixed graph.
#[derive(Clone, Debug)]
pub struct TableOutcome<L> {
    pub t: usize,
    pub n: usize,
    pub law: Law<L>,
}

impl<L: Clone + Ord> TableOutcome<L> {
    /// Every node draws a uniform coin in 0..q; node v outputs
    /// `rule(v, coins)`, where the rule may read only coins in N_t[v]
    /// (enforced by masking the rest to 0). Lists all q^n coin vectors.
    pub fn from_local_rule<N, E>(
        g: &LabeledGraph<N, E>,
        t: usize,
        q: u64,
        rule: impl Fn(NodeId, &[u64]) -> L,
    ) -> Self {
        let n = g.n();
        let balls: Vec<Vec<NodeId>> = g.nodes().map(|v| ball(g, &[v], t)).collect();
        let count = q.checked_pow(n as u32).expect("coin space too large");
        let mut rows = Vec::with_capacity(count as usize);
        let mut coins = vec![0u64; n];
        for mut k in 0..count {
            for c in coins.iter_mut() {
                *c = k % q;
                k /= q;
            }
            let out = g
                .nodes()
                .map(|v| {
                    let mut seen = vec![0u64; n];
                    for &u in &balls[v] {
                        seen[u] = coins[u];
                    }
                    rule(v, &seen)
                })
                .collect();
            rows.push((out, 1));
        }
        TableOutcome { t, n, law: Law::from_rows(rows) }
    }
}

impl<N, E, L: Clone + Ord + Debug> Outcome<N, E> for TableOutcome<L> {
    type Label = L;

    fn locality(&self, _: &LabeledGraph<N, E>) -> usize {
        self.t
    }

    fn sample(&self, g: &LabeledGraph<N, E>, seed: u64) -> Vec<L> {
        assert_eq!(g.n(), self.n, "table belongs to another graph");
        self.law.sample_row(&mut ChaCha8Rng::seed_from_u64(seed)).to_vec()
    }
}

impl<N, E, L: Clone + Ord + Debug> Enumerable<N, E> for TableOutcome<L> {
    fn law(&self, g: &LabeledGraph<N, E>) -> Law<L> {
        assert_eq!(g.n(), self.n, "table belongs to another graph");
        self.law.clone()
    }
}

/// The law of `solve_pi`: badGraph classically, then the exact GHZ
/// state-vector simulation on the ⊥-subgraph. Wins with probability 1.
#[derive(Clone, Copy, Debug, Default)]
pub struct QuantumPi;

impl Outcome<NodeKind, EdgeLabel> for QuantumPi {
    type Label = PiOut<GhzLabel>;

    fn locality(&self, g: &Instance) -> usize {
        solve_pi(g, 0).expect("⊥-subgraph compresses").locality
    }

    fn sample(&self, g: &Instance, seed: u64) -> Vec<Self::Label> {
        solve_pi(g, seed).expect("⊥-subgraph compresses").out
    }
}
