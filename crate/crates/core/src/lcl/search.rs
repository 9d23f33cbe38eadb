//! Exhaustive backtracking over output slots with partial-check pruning.

use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{Checker, Labeling, LclProblem, Slot};
use crate::graph::{bfs, EdgeId, LabeledGraph, NodeId, Scope};

/// Cap on the number of tentative assignments a search may make.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_assignments: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_assignments: 50_000_000 }
    }
}

impl Budget {
    pub const ENV: &'static str = "LCLLAB_BUDGET";

    /// Reads `bruteforce.max_assignments` from the environment, falling back
    /// to the default.
    pub fn from_env() -> Self {
        std::env::var(Self::ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map(|max_assignments| Budget { max_assignments })
            .unwrap_or_default()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("brute-force budget exceeded after {0} assignments")]
    BudgetExceeded(u64),
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    pub budget: Budget,
    /// Shuffles value order deterministically; `None` keeps alphabet order.
    pub seed: Option<u64>,
    /// Only these nodes (and their half-edges) are searched; other
    /// unassigned slots stay unassigned. `None` means every node.
    pub vars: Option<Vec<NodeId>>,
    /// Distance around an assigned slot rechecked for pruning. Defaults to
    /// `min(r, 2)`. Complete solutions are always checked in full.
    pub prune_radius: Option<usize>,
}

impl SearchOptions {
    pub fn with_budget(budget: Budget) -> Self {
        SearchOptions { budget, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug)]
enum Var {
    Node(NodeId),
    Half(EdgeId, usize),
}

enum Val<V, H> {
    Node(V),
    Half(H),
}

struct Search<'c, V, H> {
    chk: &'c dyn Checker<V, H>,
    vars: Vec<Var>,
    domains: Vec<Vec<Val<V, H>>>,
    /// Live prefix length of each domain; removed values sit past it.
    live: Vec<usize>,
    assigned: Vec<bool>,
    /// Nodes whose checks can see each variable.
    affected: Vec<Vec<NodeId>>,
    /// Variables sharing a check with each variable.
    related: Vec<Vec<usize>>,
    check_set: Vec<NodeId>,
    budget: u64,
    assignments: u64,
    count: usize,
}

impl<V: Clone, H: Clone> Search<'_, V, H> {
    fn set(&self, lab: &mut Labeling<V, H>, i: usize, c: usize) {
        match (self.vars[i], &self.domains[i][c]) {
            (Var::Node(v), Val::Node(x)) => lab.nodes[v] = Slot::Set(x.clone()),
            (Var::Half(e, s), Val::Half(x)) => lab.half[e][s] = Slot::Set(x.clone()),
            _ => unreachable!(),
        }
    }

    fn unset(&self, lab: &mut Labeling<V, H>, i: usize) {
        match self.vars[i] {
            Var::Node(v) => lab.nodes[v] = Slot::Unassigned,
            Var::Half(e, s) => lab.half[e][s] = Slot::Unassigned,
        }
    }

    fn consistent(&self, lab: &Labeling<V, H>, nodes: &[NodeId]) -> bool {
        nodes.iter().all(|&u| self.chk.check_node(lab, u).is_empty())
    }

    fn tick(&mut self) -> Result<(), SolveError> {
        self.assignments += 1;
        if self.assignments > self.budget {
            return Err(SolveError::BudgetExceeded(self.assignments - 1));
        }
        Ok(())
    }

    /// Drops values of `j` that definitely violate a check under `lab`.
    /// Returns the number removed.
    fn filter(&mut self, lab: &mut Labeling<V, H>, j: usize) -> Result<usize, SolveError> {
        let mut c = 0;
        let mut removed = 0;
        while c < self.live[j] {
            self.tick()?;
            self.set(lab, j, c);
            let ok = self.consistent(lab, &self.affected[j]);
            if ok {
                c += 1;
            } else {
                self.live[j] -= 1;
                self.domains[j].swap(c, self.live[j]);
                removed += 1;
            }
        }
        self.unset(lab, j);
        Ok(removed)
    }

    fn pick(&self) -> Option<usize> {
        (0..self.vars.len()).filter(|&i| !self.assigned[i]).min_by_key(|&i| (self.live[i], i))
    }

    fn run<F>(&mut self, lab: &mut Labeling<V, H>, visit: &mut F) -> Result<ControlFlow<()>, SolveError>
    where
        F: FnMut(&Labeling<V, H>) -> ControlFlow<()>,
    {
        let Some(i) = self.pick() else {
            if self.consistent(lab, &self.check_set) {
                self.count += 1;
                return Ok(visit(lab));
            }
            return Ok(ControlFlow::Continue(()));
        };
        self.assigned[i] = true;
        let mut c = 0;
        while c < self.live[i] {
            self.tick()?;
            self.set(lab, i, c);
            if self.consistent(lab, &self.affected[i]) {
                let mut trail: Vec<(usize, usize)> = Vec::new();
                let mut wiped = false;
                for k in 0..self.related[i].len() {
                    let j = self.related[i][k];
                    if self.assigned[j] {
                        continue;
                    }
                    let before = self.live[j];
                    self.filter(lab, j)?;
                    if self.live[j] < before {
                        trail.push((j, before));
                    }
                    if self.live[j] == 0 {
                        wiped = true;
                        break;
                    }
                }
                let flow = if wiped { ControlFlow::Continue(()) } else { self.run(lab, visit)? };
                for (j, before) in trail.into_iter().rev() {
                    self.live[j] = before;
                }
                if flow.is_break() {
                    self.assigned[i] = false;
                    return Ok(flow);
                }
            }
            c += 1;
        }
        self.unset(lab, i);
        self.assigned[i] = false;
        Ok(ControlFlow::Continue(()))
    }
}

/// Calls `visit` on every total extension of `partial` (over the selected
/// slots) that passes the checker. Returns how many were visited.
///
/// Backtracking with forward checking: after each assignment, values of
/// nearby unassigned slots that already produce a definite violation are
/// removed; the slot with the fewest remaining values is tried next.
pub fn for_each_solution<P, F>(
    p: &P,
    g: &LabeledGraph<P::NodeIn, P::EdgeIn>,
    partial: &Labeling<P::Out, P::HalfOut>,
    opts: &SearchOptions,
    mut visit: F,
) -> Result<usize, SolveError>
where
    P: LclProblem,
    F: FnMut(&Labeling<P::Out, P::HalfOut>) -> ControlFlow<()>,
{
    let chk = p.checker(g);
    let n = g.n();
    let r = p.radius();
    let prune_r = opts.prune_radius.unwrap_or(r.min(2));

    let mut in_vars = vec![opts.vars.is_none(); n];
    if let Some(vs) = &opts.vars {
        for &v in vs {
            in_vars[v] = true;
        }
    }

    let mut lab = partial.clone();
    let half_alpha = p.half_alphabet();
    let node_alpha = p.node_alphabet();

    // Base order: BFS inside the selected node set, smallest id first.
    let mut order = Vec::new();
    let mut seen = vec![false; n];
    for s in 0..n {
        if !in_vars[s] || seen[s] {
            continue;
        }
        let dist = bfs(g, &[s], None, Scope::nodes(&in_vars));
        let mut comp: Vec<NodeId> = (0..n).filter(|&v| dist[v] != usize::MAX).collect();
        comp.sort_by_key(|&v| (dist[v], v));
        for v in comp {
            seen[v] = true;
            order.push(v);
        }
    }

    let mut vars = Vec::new();
    for &v in &order {
        if !lab.nodes[v].is_set() {
            vars.push(Var::Node(v));
        }
        for &e in g.incident(v) {
            let side = usize::from(g.edge(e).u != v);
            if lab.half[e][side].is_set() {
                continue;
            }
            if half_alpha.len() == 1 {
                lab.half[e][side] = Slot::Set(half_alpha[0].clone());
            } else {
                vars.push(Var::Half(e, side));
            }
        }
    }

    let mut rng = opts.seed.map(ChaCha8Rng::seed_from_u64);
    let mut domains: Vec<Vec<Val<P::Out, P::HalfOut>>> = Vec::with_capacity(vars.len());
    for var in &vars {
        let d = match *var {
            Var::Node(v) => {
                let mut d = chk.node_candidates(v).unwrap_or_else(|| node_alpha.clone());
                if let Some(rng) = rng.as_mut() {
                    d.shuffle(rng);
                }
                d.into_iter().map(Val::Node).collect()
            }
            Var::Half(..) => {
                let mut d = half_alpha.clone();
                if let Some(rng) = rng.as_mut() {
                    d.shuffle(rng);
                }
                d.into_iter().map(Val::Half).collect()
            }
        };
        domains.push(d);
    }

    // Nodes whose verdict can change: within r of a selected node.
    let var_nodes: Vec<NodeId> = (0..n).filter(|&v| in_vars[v]).collect();
    let check_set: Vec<NodeId> = if opts.vars.is_none() {
        (0..n).collect()
    } else {
        let d = bfs(g, &var_nodes, Some(r), Scope::FULL);
        (0..n).filter(|&v| d[v] <= r).collect()
    };
    let mut in_check = vec![false; n];
    for &v in &check_set {
        in_check[v] = true;
    }
    let owner = |var: &Var| match *var {
        Var::Node(v) => v,
        Var::Half(e, side) => {
            let ed = g.edge(e);
            if side == 0 {
                ed.u
            } else {
                ed.v
            }
        }
    };
    let affected: Vec<Vec<NodeId>> = vars
        .iter()
        .map(|var| {
            let d = bfs(g, &[owner(var)], Some(prune_r), Scope::FULL);
            (0..n).filter(|&u| d[u] <= prune_r && in_check[u]).collect()
        })
        .collect();
    let mut vars_at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, var) in vars.iter().enumerate() {
        vars_at[owner(var)].push(i);
    }
    let related: Vec<Vec<usize>> = vars
        .iter()
        .enumerate()
        .map(|(i, var)| {
            let d = bfs(g, &[owner(var)], Some(2 * prune_r), Scope::FULL);
            let mut rel: Vec<usize> = (0..n)
                .filter(|&u| d[u] <= 2 * prune_r)
                .flat_map(|u| vars_at[u].iter().copied())
                .filter(|&j| j != i)
                .collect();
            rel.sort_unstable();
            rel
        })
        .collect();

    if vars.is_empty() {
        let ok = check_set.iter().all(|&u| chk.check_node(&lab, u).is_empty());
        if ok {
            let _ = visit(&lab);
            return Ok(1);
        }
        return Ok(0);
    }

    let live = domains.iter().map(Vec::len).collect();
    let mut s = Search {
        chk: chk.as_ref(),
        assigned: vec![false; vars.len()],
        vars,
        domains,
        live,
        affected,
        related,
        check_set,
        budget: opts.budget.max_assignments,
        assignments: 0,
        count: 0,
    };
    // Node consistency against the initial partial labeling.
    for j in 0..s.vars.len() {
        s.filter(&mut lab, j)?;
        if s.live[j] == 0 {
            return Ok(0);
        }
    }
    let _ = s.run(&mut lab, &mut visit)?;
    Ok(s.count)
}

/// A total extension of `partial` passing the checker, `Ok(None)` if none
/// exists, or a resource error when the budget runs out first.
pub fn brute_force_solve<P: LclProblem>(
    p: &P,
    g: &LabeledGraph<P::NodeIn, P::EdgeIn>,
    partial: &Labeling<P::Out, P::HalfOut>,
    opts: &SearchOptions,
) -> Result<Option<Labeling<P::Out, P::HalfOut>>, SolveError> {
    let mut found = None;
    for_each_solution(p, g, partial, opts, |lab| {
        found = Some(lab.clone());
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// Every valid total labeling, in deterministic search order.
pub fn enumerate_solutions<P: LclProblem>(
    p: &P,
    g: &LabeledGraph<P::NodeIn, P::EdgeIn>,
    opts: &SearchOptions,
) -> Result<Vec<Labeling<P::Out, P::HalfOut>>, SolveError> {
    let mut all = Vec::new();
    let empty = Labeling::unassigned(g.n(), g.m());
    for_each_solution(p, g, &empty, opts, |lab| {
        all.push(lab.clone());
        ControlFlow::Continue(())
    })?;
    Ok(all)
}
