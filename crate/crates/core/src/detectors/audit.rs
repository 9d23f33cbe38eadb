use std::collections::VecDeque;

use serde::Serialize;

use super::badgraph::{bot_subgraph, check_badgraph, solve_badgraph};
use super::badoctopus::{check_badoctopus, solve_badoctopus, OctContext};
use super::badtree::{badtree_radius, broken_components, check_badtree, solve_badtree};
use crate::gadgets::{check_proper, Instance};
use crate::graph::Scope;

/// Nodes connected (over all edges) to a marked node or a C^octopus
/// violator: where badOctopus must not output ⊥.
pub fn octopus_required(g: &Instance) -> Vec<bool> {
    let ctx = OctContext::new(g, None);
    let mut req = vec![false; g.n()];
    let mut q = VecDeque::new();
    for v in g.nodes() {
        if ctx.violates[v] || g.input(v).mark {
            req[v] = true;
            q.push_back(v);
        }
    }
    while let Some(v) = q.pop_front() {
        for u in g.neighbors(v) {
            if !req[u] {
                req[u] = true;
                q.push_back(u);
            }
        }
    }
    req
}

/// Outcome of one detector run on one instance.
#[derive(Clone, Debug, Serialize)]
pub struct Audit {
    pub n: usize,
    /// Checker violations of the solver's output.
    pub violations: usize,
    /// Required nodes left at ⊥ (badTree/badOctopus), or C^proper
    /// violations on the ⊥-induced subgraph (badGraph).
    pub missed: usize,
    pub max_round: usize,
}

impl Audit {
    pub fn ok(&self) -> bool {
        self.violations == 0 && self.missed == 0
    }
}

pub fn audit_badtree(g: &Instance) -> Audit {
    let run = solve_badtree(g);
    let marks: Vec<bool> = g.nodes().map(|v| g.input(v).mark).collect();
    let req = broken_components(g, Scope::FULL, &marks);
    let missed = g.nodes().filter(|&v| req[v] == run.out[v].is_bot()).count();
    Audit {
        n: g.n(),
        violations: check_badtree(g, &run.out).len(),
        missed,
        max_round: badtree_radius(&run).into_iter().max().unwrap_or(0),
    }
}

pub fn audit_badoctopus(g: &Instance) -> Audit {
    let run = solve_badoctopus(g);
    let req = octopus_required(g);
    let missed = g.nodes().filter(|&v| req[v] == run.out[v].is_bot()).count();
    Audit {
        n: g.n(),
        violations: check_badoctopus(g, &run.out).len(),
        missed,
        max_round: run.round.iter().copied().max().unwrap_or(0),
    }
}

pub fn audit_badgraph(g: &Instance) -> Audit {
    let run = solve_badgraph(g);
    let (sub, _) = bot_subgraph(g, &run.out);
    Audit {
        n: g.n(),
        violations: check_badgraph(g, &run.out).len(),
        missed: check_proper(&sub).len(),
        max_round: run.round.iter().copied().max().unwrap_or(0),
    }
}

/// Least-squares fit of `max_round ≈ a + c·log2 n`, plus the largest
/// ratio `max_round / log2 n`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LocalityFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_ratio: f64,
}

pub fn fit_locality(samples: &[(usize, usize)]) -> LocalityFit {
    let pts: Vec<(f64, f64)> =
        samples.iter().filter(|s| s.0 >= 2).map(|&(n, r)| ((n as f64).log2(), r as f64)).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let max_ratio = pts.iter().map(|p| p.1 / p.0).fold(0.0, f64::max);
    LocalityFit { slope, intercept: my - slope * mx, max_ratio }
}
