//! Materialized constraint sets: centered balls up to isomorphism.

use std::collections::HashSet;
use std::fmt::Debug;

use thiserror::Error;

use super::{Labeling, LclProblem};
use crate::graph::{bfs, LabeledGraph, NodeId, Scope};

/// Canonical encoding of a fully labeled centered ball.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BallKey(pub String);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("ball around node {0} has too many layer permutations to canonize")]
    TooLarge(NodeId),
    #[error("ball around node {0} is not fully labeled")]
    Partial(NodeId),
    #[error("the predicate gives two verdicts for one ball class (node {0})")]
    Inconsistent(NodeId),
    #[error("ball around node {0} was never materialized")]
    Unseen(NodeId),
}

const MAX_PERMUTATIONS: usize = 50_000;

/// The allowed and forbidden centered balls seen so far.
#[derive(Clone, Debug, Default)]
pub struct BallCatalog {
    pub allowed: HashSet<BallKey>,
    pub forbidden: HashSet<BallKey>,
}

impl BallCatalog {
    /// Classifies every centered ball of every sample with the problem's
    /// own predicate.
    pub fn materialize<'s, P, I>(p: &P, samples: I) -> Result<Self, CatalogError>
    where
        P: LclProblem,
        P::NodeIn: Debug + 's,
        P::EdgeIn: Debug + 's,
        P::HalfOut: 's,
        P::Out: 's,
        I: IntoIterator<Item = (&'s LabeledGraph<P::NodeIn, P::EdgeIn>, &'s Labeling<P::Out, P::HalfOut>)>,
    {
        let mut cat = BallCatalog::default();
        for (g, out) in samples {
            let chk = p.checker(g);
            for v in g.nodes() {
                let key = ball_key(g, out, v, p.radius())?;
                let ok = chk.check_node(out, v).is_empty();
                let (mine, other) = if ok {
                    (&mut cat.allowed, &cat.forbidden)
                } else {
                    (&mut cat.forbidden, &cat.allowed)
                };
                if other.contains(&key) {
                    return Err(CatalogError::Inconsistent(v));
                }
                mine.insert(key);
            }
        }
        Ok(cat)
    }

    /// Nodes whose centered ball is not in the allowed set.
    pub fn rejected<N: Debug, E: Debug, V: Debug, H: Debug>(
        &self,
        g: &LabeledGraph<N, E>,
        out: &Labeling<V, H>,
        r: usize,
    ) -> Result<Vec<NodeId>, CatalogError> {
        let mut bad = Vec::new();
        for v in g.nodes() {
            let key = ball_key(g, out, v, r)?;
            if self.allowed.contains(&key) {
                continue;
            }
            if self.forbidden.contains(&key) {
                bad.push(v);
            } else {
                return Err(CatalogError::Unseen(v));
            }
        }
        Ok(bad)
    }

    pub fn len(&self) -> usize {
        self.allowed.len() + self.forbidden.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Canonical form of G[N_r[v]] with all labels, minimized over orderings
/// that keep the center first and respect distance layers.
pub fn ball_key<N: Debug, E: Debug, V: Debug, H: Debug>(
    g: &LabeledGraph<N, E>,
    out: &Labeling<V, H>,
    v: NodeId,
    r: usize,
) -> Result<BallKey, CatalogError> {
    let dist = bfs(g, &[v], Some(r), Scope::FULL);
    let mut layers: Vec<Vec<NodeId>> = vec![Vec::new(); r + 1];
    for u in g.nodes() {
        if dist[u] <= r {
            layers[dist[u]].push(u);
        }
    }
    let mut perms = 1usize;
    for l in &layers {
        for k in 1..=l.len() {
            perms = perms.saturating_mul(k);
        }
    }
    if perms > MAX_PERMUTATIONS {
        return Err(CatalogError::TooLarge(v));
    }

    let node_desc = |u: NodeId| -> Result<String, CatalogError> {
        let o = out.node(u).ok_or(CatalogError::Partial(v))?;
        Ok(format!("{}|{:?}|{:?}", dist[u], g.label(u), o))
    };
    let mut descs = std::collections::HashMap::new();
    for l in &layers {
        for &u in l {
            descs.insert(u, node_desc(u)?);
        }
    }
    let mut edges = Vec::new();
    for (e, ed) in g.edges().iter().enumerate() {
        if dist[ed.u] <= r && dist[ed.v] <= r {
            let ou = out.half_at(g, e, ed.u).ok_or(CatalogError::Partial(v))?;
            let ov = out.half_at(g, e, ed.v).ok_or(CatalogError::Partial(v))?;
            edges.push((ed.u, ed.v, format!("{:?}/{:?}", ed.lu, ou), format!("{:?}/{:?}", ed.lv, ov)));
        }
    }

    let mut best: Option<String> = None;
    let mut current: Vec<Vec<NodeId>> = layers.clone();
    enumerate_layers(&mut current, 0, &mut |order: &[Vec<NodeId>]| {
        let mut pos = std::collections::HashMap::new();
        let mut s = String::new();
        for &u in order.iter().flatten() {
            pos.insert(u, pos.len());
            s.push_str(&descs[&u]);
            s.push(';');
        }
        let mut es: Vec<String> = edges
            .iter()
            .map(|(a, b, la, lb)| {
                let (pa, pb) = (pos[a], pos[b]);
                if pa <= pb {
                    format!("{pa}-{pb}:{la}:{lb}")
                } else {
                    format!("{pb}-{pa}:{lb}:{la}")
                }
            })
            .collect();
        es.sort();
        s.push('#');
        s.push_str(&es.join(","));
        if best.as_ref().map_or(true, |b| s < *b) {
            best = Some(s);
        }
    });
    Ok(BallKey(best.unwrap_or_default()))
}

fn enumerate_layers(layers: &mut Vec<Vec<NodeId>>, i: usize, f: &mut dyn FnMut(&[Vec<NodeId>])) {
    if i == layers.len() {
        f(layers);
        return;
    }
    let len = layers[i].len();
    permute(layers, i, 0, len, f);
}

fn permute(
    layers: &mut Vec<Vec<NodeId>>,
    i: usize,
    k: usize,
    len: usize,
    f: &mut dyn FnMut(&[Vec<NodeId>]),
) {
    if k + 1 >= len {
        enumerate_layers(layers, i + 1, f);
        return;
    }
    for j in k..len {
        layers[i].swap(k, j);
        permute(layers, i, k + 1, len, f);
        layers[i].swap(k, j);
    }
}
