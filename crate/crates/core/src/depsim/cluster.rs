use serde::Serialize;

use crate::graph::{bfs, power_graph, LabeledGraph, NodeId, Scope};

/// V = D ∪ S_1 ∪ … ∪ S_k with well-separated clusters.
#[derive(Clone, Debug, Serialize)]
pub struct Clustering {
    pub d: Vec<NodeId>,
    pub clusters: Vec<Vec<NodeId>>,
    pub eps: f64,
    /// Clusters are pairwise more than `r` apart in G.
    pub r: usize,
    /// Carving radius of each cluster, in hops of G^r.
    pub carve_radius: Vec<usize>,
}

impl Clustering {
    /// Owning cluster of each node; `None` for D.
    pub fn owner(&self, n: usize) -> Vec<Option<usize>> {
        let mut o = vec![None; n];
        for (i, c) in self.clusters.iter().enumerate() {
            for &v in c {
                o[v] = Some(i);
            }
        }
        o
    }

    /// Largest G-diameter of a cluster.
    pub fn max_diameter<N, E>(&self, g: &LabeledGraph<N, E>) -> usize {
        self.clusters.iter().map(|c| set_diameter(g, c)).max().unwrap_or(0)
    }

    /// Locality of the carving: a node sees its whole carved ball and the
    /// ring around it.
    pub fn locality(&self) -> usize {
        self.carve_radius.iter().map(|k| self.r * (2 * k + 1)).max().unwrap_or(0)
    }

    /// |D| ≤ εn, partition property, and every pair of clusters more than
    /// r apart in G.
    pub fn check<N, E>(&self, g: &LabeledGraph<N, E>) -> Result<(), String> {
        let n = g.n();
        if self.d.len() as f64 > self.eps * n as f64 + 1e-9 {
            return Err(format!("|D| = {} exceeds εn = {}", self.d.len(), self.eps * n as f64));
        }
        let mut seen = vec![false; n];
        for &v in self.d.iter().chain(self.clusters.iter().flatten()) {
            if std::mem::replace(&mut seen[v], true) {
                return Err(format!("node {v} appears twice"));
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(format!("node {v} is not covered"));
        }
        let owner = self.owner(n);
        for (i, c) in self.clusters.iter().enumerate() {
            let dist = bfs(g, c, Some(self.r), Scope::FULL);
            if let Some(v) = g.nodes().find(|&v| dist[v] <= self.r && owner[v].is_some_and(|j| j != i)) {
                return Err(format!("cluster {i} is within {} of node {v} in another cluster", dist[v]));
            }
        }
        Ok(())
    }
}

/// Largest pairwise G-distance inside a node set.
pub(crate) fn set_diameter<N, E>(g: &LabeledGraph<N, E>, s: &[NodeId]) -> usize {
    s.iter()
        .map(|&v| {
            let d = bfs(g, &[v], None, Scope::FULL);
            s.iter().map(|&u| d[u]).max().unwrap_or(0)
        })
        .max()
        .unwrap_or(0)
}

/// Ball carving on G^r: from the smallest remaining node grow balls in
/// the remaining part of G^r until the next layer holds at most ε times the
/// ball; the ball becomes a cluster and that layer goes to D. Ball sizes
/// grow by a factor 1 + ε per step before stopping, so carving radii are
/// O(log n / ε).
pub fn cluster<N: Clone, E>(g: &LabeledGraph<N, E>, r: usize, eps: f64) -> Clustering {
    assert!(eps > 0.0 && eps <= 1.0, "ε must lie in (0, 1]");
    let n = g.n();
    let h = power_graph(g, r.max(1));
    let mut alive = vec![true; n];
    let mut d = Vec::new();
    let mut clusters = Vec::new();
    let mut carve_radius = Vec::new();
    for s in 0..n {
        if !alive[s] {
            continue;
        }
        let mut layers: Vec<Vec<NodeId>> = vec![vec![s]];
        let mut inball = vec![false; n];
        inball[s] = true;
        let mut size = 1;
        loop {
            let mut next = Vec::new();
            for &v in layers.last().unwrap() {
                for u in h.neighbors(v) {
                    if alive[u] && !inball[u] {
                        inball[u] = true;
                        next.push(u);
                    }
                }
            }
            next.sort_unstable();
            if next.len() as f64 <= eps * size as f64 {
                let ball: Vec<NodeId> = layers.concat();
                for &v in ball.iter().chain(&next) {
                    alive[v] = false;
                }
                carve_radius.push(layers.len() - 1);
                let mut ball = ball;
                ball.sort_unstable();
                clusters.push(ball);
                d.extend(next);
                break;
            }
            size += next.len();
            layers.push(next);
        }
    }
    d.sort_unstable();
    Clustering { d, clusters, eps, r, carve_radius }
}

/// D split into parts more than 2T apart.
#[derive(Clone, Debug, Serialize)]
pub struct DPartition {
    pub parts: Vec<Vec<NodeId>>,
    pub t: usize,
    /// Exploration iterations until no part grows.
    pub iterations: usize,
}

impl DPartition {
    /// Each iteration inspects a radius-2T ball.
    pub fn locality(&self) -> usize {
        self.iterations * 2 * self.t
    }

    pub fn max_diameter<N, E>(&self, g: &LabeledGraph<N, E>) -> usize {
        self.parts.iter().map(|p| set_diameter(g, p)).max().unwrap_or(0)
    }

    /// Pairwise G-distance between parts is at least 2T + 1.
    pub fn check<N, E>(&self, g: &LabeledGraph<N, E>) -> Result<(), String> {
        let mut part = vec![usize::MAX; g.n()];
        for (i, p) in self.parts.iter().enumerate() {
            for &v in p {
                part[v] = i;
            }
        }
        for (i, p) in self.parts.iter().enumerate() {
            let dist = bfs(g, p, Some(2 * self.t), Scope::FULL);
            if let Some(v) = g.nodes().find(|&v| dist[v] <= 2 * self.t && part[v] != usize::MAX && part[v] != i) {
                return Err(format!("parts {i} and {} are {} apart", part[v], dist[v]));
            }
        }
        Ok(())
    }
}

/// Iterative exploration: every D-node repeatedly scans radius 2T around
/// the newest members of its part and absorbs the D-nodes it finds. The
/// parts are the components of G^{2T}[D].
pub fn partition_d<N, E>(g: &LabeledGraph<N, E>, d: &[NodeId], t: usize) -> DPartition {
    let n = g.n();
    let mut in_d = vec![false; n];
    for &v in d {
        in_d[v] = true;
    }
    let mut part = vec![usize::MAX; n];
    let mut parts = Vec::new();
    let mut iterations = 0;
    let mut sorted = d.to_vec();
    sorted.sort_unstable();
    for &s in &sorted {
        if part[s] != usize::MAX {
            continue;
        }
        let id = parts.len();
        part[s] = id;
        let mut members = vec![s];
        let mut frontier = vec![s];
        let mut rounds = 0;
        while !frontier.is_empty() {
            rounds += 1;
            let dist = bfs(g, &frontier, Some(2 * t), Scope::FULL);
            frontier = g.nodes().filter(|&v| in_d[v] && part[v] == usize::MAX && dist[v] <= 2 * t).collect();
            for &v in &frontier {
                part[v] = id;
            }
            members.extend(&frontier);
        }
        members.sort_unstable();
        parts.push(members);
        iterations = iterations.max(rounds);
    }
    DPartition { parts, t, iterations }
}
