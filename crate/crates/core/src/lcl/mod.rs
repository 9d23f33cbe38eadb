//! LCL problems, labelings, violations and local verification.

mod catalog;
mod search;
pub mod toy;

use std::fmt::Debug;

use serde::Serialize;

use crate::graph::{EdgeId, LabeledGraph, NodeId};

pub use catalog::{BallCatalog, BallKey, CatalogError};
pub use search::{
    brute_force_solve, enumerate_solutions, for_each_solution, Budget, SearchOptions, SolveError,
};

/// One output slot. `Unassigned` is distinct from any real label (⊥ included).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize)]
pub enum Slot<T> {
    #[default]
    Unassigned,
    Set(T),
}

impl<T> Slot<T> {
    pub fn get(&self) -> Option<&T> {
        match self {
            Slot::Set(t) => Some(t),
            Slot::Unassigned => None,
        }
    }

    pub fn is_set(&self) -> bool {
        matches!(self, Slot::Set(_))
    }
}

/// A possibly partial output assignment: one slot per node and one per
/// half-edge (`half[e][0]` sits at `edge.u`, `half[e][1]` at `edge.v`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Labeling<V, E = ()> {
    pub nodes: Vec<Slot<V>>,
    pub half: Vec<[Slot<E>; 2]>,
}

impl<V, E> Labeling<V, E> {
    pub fn node(&self, v: NodeId) -> Option<&V> {
        self.nodes[v].get()
    }

    pub fn set_node(&mut self, v: NodeId, l: V) {
        self.nodes[v] = Slot::Set(l);
    }

    pub fn half_at<N, EI>(&self, g: &LabeledGraph<N, EI>, e: EdgeId, at: NodeId) -> Option<&E> {
        let side = usize::from(g.edge(e).u != at);
        self.half[e][side].get()
    }

    pub fn is_total(&self) -> bool {
        self.nodes.iter().all(Slot::is_set) && self.half.iter().all(|h| h[0].is_set() && h[1].is_set())
    }
}

impl<V: Clone, E: Clone> Labeling<V, E> {
    pub fn unassigned(n: usize, m: usize) -> Self {
        Labeling { nodes: vec![Slot::Unassigned; n], half: vec![[Slot::Unassigned, Slot::Unassigned]; m] }
    }

    pub fn for_graph<N, EI>(g: &LabeledGraph<N, EI>) -> Self {
        Self::unassigned(g.n(), g.m())
    }


    /// Node labels of a total labeling.
    pub fn node_values(&self) -> Option<Vec<V>> {
        self.nodes.iter().map(|s| s.get().cloned()).collect()
    }

    /// Keeps only the node slots in `keep`; everything else becomes unassigned.
    pub fn restricted_to(&self, keep: &[NodeId]) -> Self {
        let mut out = Self::unassigned(self.nodes.len(), self.half.len());
        for &v in keep {
            out.nodes[v] = self.nodes[v].clone();
        }
        out.half = self.half.clone();
        out
    }
}

impl<V: Clone> Labeling<V, ()> {
    /// Total labeling from node values; half-edge slots get the unit label.
    pub fn from_nodes(values: Vec<V>, m: usize) -> Self {
        Labeling {
            nodes: values.into_iter().map(Slot::Set).collect(),
            half: vec![[Slot::Set(()), Slot::Set(())]; m],
        }
    }

    pub fn partial_from(values: Vec<Option<V>>, m: usize) -> Self {
        Labeling {
            nodes: values.into_iter().map(|v| v.map_or(Slot::Unassigned, Slot::Set)).collect(),
            half: vec![[Slot::Set(()), Slot::Set(())]; m],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Violation {
    pub node: NodeId,
    pub constraint: String,
    pub detail: String,
}

impl Violation {
    pub fn new(node: NodeId, constraint: impl Into<String>, detail: impl Into<String>) -> Self {
        Violation { node, constraint: constraint.into(), detail: detail.into() }
    }
}

/// Returned by partial-aware checks when a value they need is unassigned.
/// A check that hits `Unknown` reports nothing, which keeps violations on
/// partial labelings definite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Unknown;

pub type Partial<T> = Result<T, Unknown>;

/// Runs one constraint item, turning `Unknown` into "no verdict".
pub fn item(out: &mut Vec<Violation>, r: Partial<Option<Violation>>) {
    if let Ok(Some(v)) = r {
        out.push(v);
    }
}

/// Verifier prepared for one input graph.
pub trait Checker<V, E = ()> {
    fn n(&self) -> usize;

    /// Violations at `v`. On partial labelings only definite violations are
    /// reported.
    fn check_node(&self, out: &Labeling<V, E>, v: NodeId) -> Vec<Violation>;

    fn check_all(&self, out: &Labeling<V, E>) -> Vec<Violation> {
        (0..self.n()).flat_map(|v| self.check_node(out, v)).collect()
    }

    /// A sound restriction of the node alphabet at `v` (every label of any
    /// valid solution at `v` is kept). `None` means the full alphabet.
    fn node_candidates(&self, _v: NodeId) -> Option<Vec<V>> {
        None
    }
}

/// An (r, Δ)-LCL given by a predicate over centered balls.
pub trait LclProblem {
    type NodeIn;
    type EdgeIn;
    type Out: Clone + PartialEq + Debug;
    type HalfOut: Clone + PartialEq + Debug;

    fn name(&self) -> String;
    fn radius(&self) -> usize;
    fn max_degree(&self) -> Option<usize> {
        None
    }
    fn node_alphabet(&self) -> Vec<Self::Out>;
    fn half_alphabet(&self) -> Vec<Self::HalfOut>;
    fn checker<'a>(
        &'a self,
        g: &'a LabeledGraph<Self::NodeIn, Self::EdgeIn>,
    ) -> Box<dyn Checker<Self::Out, Self::HalfOut> + 'a>;
}

pub fn check_node<P: LclProblem>(
    p: &P,
    g: &LabeledGraph<P::NodeIn, P::EdgeIn>,
    out: &Labeling<P::Out, P::HalfOut>,
    v: NodeId,
) -> Vec<Violation> {
    p.checker(g).check_node(out, v)
}

pub fn check_all<P: LclProblem>(
    p: &P,
    g: &LabeledGraph<P::NodeIn, P::EdgeIn>,
    out: &Labeling<P::Out, P::HalfOut>,
) -> Vec<Violation> {
    p.checker(g).check_all(out)
}
