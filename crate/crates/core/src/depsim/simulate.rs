use std::collections::BTreeMap;

use serde::Serialize;

use super::cluster::{cluster, partition_d, Clustering, DPartition};
use super::outcome::{sub_seed, Enumerable, Outcome};
use crate::graph::{LabeledGraph, NodeId};
use crate::lcl::{brute_force_solve, Budget, Labeling, LclProblem, SearchOptions, SolveError};

/// One independent sample per part, each from the outcome's restriction to
/// that part. Nodes outside D stay unlabeled.
pub fn sample_d<N, E, O: Outcome<N, E>>(
    outcome: &O,
    g: &LabeledGraph<N, E>,
    dp: &DPartition,
    seed: u64,
) -> Vec<Option<O::Label>> {
    let mut out = vec![None; g.n()];
    for (i, part) in dp.parts.iter().enumerate() {
        let s = outcome.sample_on(g, part, sub_seed(seed, i as u64));
        for (&v, l) in part.iter().zip(s) {
            out[v] = Some(l);
        }
    }
    out
}

/// Exact law of `sample_d` over labelings of D (in sorted node order): the
/// product of the part marginals, as weights over total^h.
pub fn sample_d_law<N, E, O: Enumerable<N, E>>(
    outcome: &O,
    g: &LabeledGraph<N, E>,
    dp: &DPartition,
) -> (BTreeMap<Vec<O::Label>, u128>, u128) {
    let law = outcome.law(g);
    let mut d: Vec<NodeId> = dp.parts.concat();
    d.sort_unstable();
    let pos = |v: NodeId| d.binary_search(&v).unwrap();
    let mut acc: BTreeMap<Vec<Option<O::Label>>, u128> = BTreeMap::from([(vec![None; d.len()], 1)]);
    for part in &dp.parts {
        let m = law.marginal(part);
        let mut next = BTreeMap::new();
        for (row, &w) in &acc {
            for (vals, &c) in &m {
                let mut r = row.clone();
                for (&v, l) in part.iter().zip(vals) {
                    r[pos(v)] = Some(l.clone());
                }
                *next.entry(r).or_insert(0) += w * c as u128;
            }
        }
        acc = next;
    }
    let total = (law.total as u128).pow(dp.parts.len() as u32);
    let rows = acc.into_iter().map(|(r, w)| (r.into_iter().map(Option::unwrap).collect(), w)).collect();
    (rows, total)
}

/// Completes each cluster independently by exhaustive search against the
/// frozen D labels. `Ok(None)` as soon as some cluster has no completion.
pub fn complete_clusters<P>(
    p: &P,
    g: &LabeledGraph<P::NodeIn, P::EdgeIn>,
    clustering: &Clustering,
    partial: &[Option<P::Out>],
    budget: Budget,
) -> Result<Option<Vec<P::Out>>, SolveError>
where
    P: LclProblem<HalfOut = ()>,
{
    assert!(clustering.r >= p.radius(), "clusters must be more than the checking radius apart");
    let base = Labeling::partial_from(partial.to_vec(), g.m());
    let mut out: Vec<Option<P::Out>> = partial.to_vec();
    for c in &clustering.clusters {
        let opts = SearchOptions { budget, vars: Some(c.clone()), ..Default::default() };
        let Some(lab) = brute_force_solve(p, g, &base, &opts)? else {
            return Ok(None);
        };
        for &v in c {
            out[v] = lab.node(v).cloned();
        }
    }
    let out: Vec<P::Out> = out.into_iter().map(|o| o.expect("every node is in D or a cluster")).collect();
    debug_assert!(p.checker(g).check_all(&Labeling::from_nodes(out.clone(), g.m())).is_empty());
    Ok(Some(out))
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SimOptions {
    /// Defaults to 1/√(nT).
    pub eps: Option<f64>,
    pub budget: Budget,
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct StepLocality {
    pub cluster: usize,
    pub partition: usize,
    pub sample: usize,
    pub complete: usize,
}

impl StepLocality {
    pub fn total(&self) -> usize {
        self.cluster + self.partition + self.sample + self.complete
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SimResult<L> {
    /// `None` when some cluster could not be completed.
    pub labeling: Option<Vec<L>>,
    pub t: usize,
    pub eps: f64,
    pub clustering: Clustering,
    pub partition: DPartition,
    pub locality: StepLocality,
}

/// The four-step randomized simulation of a bounded-dependence outcome:
/// cluster G^r, split D into parts more than 2T apart, sample each part
/// independently, and complete each cluster by brute force.
pub fn simulate<P, O>(
    outcome: &O,
    p: &P,
    g: &LabeledGraph<P::NodeIn, P::EdgeIn>,
    seed: u64,
    opts: SimOptions,
) -> Result<SimResult<P::Out>, SolveError>
where
    P: LclProblem<HalfOut = ()>,
    P::NodeIn: Clone,
    O: Outcome<P::NodeIn, P::EdgeIn, Label = P::Out>,
{
    let t = outcome.locality(g);
    let n = g.n().max(1);
    let eps = opts.eps.unwrap_or_else(|| (1.0 / ((n * t.max(1)) as f64).sqrt()).min(1.0));
    let clustering = cluster(g, p.radius(), eps);
    let partition = partition_d(g, &clustering.d, t);
    let partial = sample_d(outcome, g, &partition, seed);
    let locality = StepLocality {
        cluster: clustering.locality(),
        partition: partition.locality(),
        sample: if partition.parts.is_empty() { 0 } else { partition.max_diameter(g) + t },
        complete: if clustering.clusters.is_empty() { 0 } else { clustering.max_diameter(g) + p.radius() },
    };
    let labeling = complete_clusters(p, g, &clustering, &partial, opts.budget)?;
    Ok(SimResult { labeling, t, eps, clustering, partition, locality })
}
