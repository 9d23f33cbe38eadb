use std::collections::BTreeSet;
use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::gadgets::BipartiteInstance;
use crate::lcl::Violation;

/// A linearizable problem (Σ, (F, L, P), B). White nodes see their edge
/// labels as a sequence in σ order; black nodes see a multiset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearizableProblem<S: Ord> {
    pub sigma: Vec<S>,
    pub first: BTreeSet<S>,
    pub last: BTreeSet<S>,
    pub pairs: BTreeSet<(S, S)>,
    /// Allowed black configurations as sorted multisets.
    pub black: BTreeSet<Vec<S>>,
    pub rank: usize,
}

impl<S: Ord + Clone + Debug> LinearizableProblem<S> {
    /// Configurations larger than the rank are unconstrained.
    pub fn allows_black(&self, labels: &[S]) -> bool {
        if labels.len() > self.rank {
            return true;
        }
        let mut m = labels.to_vec();
        m.sort();
        self.black.contains(&m)
    }

    pub fn allows_pair(&self, a: &S, b: &S) -> bool {
        self.pairs.contains(&(a.clone(), b.clone()))
    }

    /// White constraint on one σ-ordered label sequence.
    pub fn white_ok(&self, seq: &[S]) -> bool {
        match (seq.first(), seq.last()) {
            (Some(f), Some(l)) => {
                self.first.contains(f) && self.last.contains(l) && seq.windows(2).all(|w| self.allows_pair(&w[0], &w[1]))
            }
            _ => true,
        }
    }

    /// Violations of a per-edge labeling. White `w` reports as node `w`,
    /// black `b` as node `whites + b`.
    pub fn check(&self, b: &BipartiteInstance, sol: &[S]) -> Vec<Violation> {
        let mut out = Vec::new();
        for (w, order) in b.order.iter().enumerate() {
            let seq: Vec<S> = order.iter().map(|&e| sol[e].clone()).collect();
            let Some(f) = seq.first() else { continue };
            if !self.first.contains(f) {
                out.push(Violation::new(w, "linearizable.first", format!("{f:?} not in F")));
            }
            let l = seq.last().unwrap();
            if !self.last.contains(l) {
                out.push(Violation::new(w, "linearizable.last", format!("{l:?} not in L")));
            }
            for (i, p) in seq.windows(2).enumerate() {
                if !self.allows_pair(&p[0], &p[1]) {
                    out.push(Violation::new(w, "linearizable.pair", format!("positions {} and {}", i + 1, i + 2)));
                }
            }
        }
        for k in 0..b.blacks {
            let labels: Vec<S> = b.black_edges(k).into_iter().map(|e| sol[e].clone()).collect();
            if !self.allows_black(&labels) {
                out.push(Violation::new(b.whites + k, "linearizable.black", format!("{labels:?} not in B")));
            }
        }
        out
    }
}

/// All sorted multisets of size `k` over `sigma`.
pub(crate) fn multisets<S: Clone + Ord>(sigma: &[S], k: usize) -> Vec<Vec<S>> {
    let mut s = sigma.to_vec();
    s.sort();
    s.dedup();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec<S: Clone>(s: &[S], start: usize, k: usize, cur: &mut Vec<S>, out: &mut Vec<Vec<S>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..s.len() {
            cur.push(s[i].clone());
            rec(s, i, k, cur, out);
            cur.pop();
        }
    }
    rec(&s, 0, k, &mut cur, &mut out);
    out
}
