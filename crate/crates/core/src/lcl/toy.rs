//! Small reference problems used by tests, the CLI and the simulation
//! pipeline.

use std::marker::PhantomData;

use super::{Checker, Labeling, LclProblem, Violation};
use crate::graph::{LabeledGraph, NodeId};

/// Proper k-coloring (radius 1).
pub struct Coloring<N, E> {
    pub k: u8,
    _p: PhantomData<fn(N, E)>,
}

impl<N, E> Coloring<N, E> {
    pub fn new(k: u8) -> Self {
        Coloring { k, _p: PhantomData }
    }
}

struct ColoringChecker<'a, N, E> {
    g: &'a LabeledGraph<N, E>,
}

impl<N, E> Checker<u8> for ColoringChecker<'_, N, E> {
    fn n(&self) -> usize {
        self.g.n()
    }

    fn check_node(&self, out: &Labeling<u8>, v: NodeId) -> Vec<Violation> {
        let Some(c) = out.node(v) else { return Vec::new() };
        self.g
            .neighbors(v)
            .filter(|&u| out.node(u) == Some(c))
            .map(|u| Violation::new(v, "coloring", format!("neighbor {u} shares color {c}")))
            .collect()
    }
}

impl<N, E> LclProblem for Coloring<N, E> {
    type NodeIn = N;
    type EdgeIn = E;
    type Out = u8;
    type HalfOut = ();

    fn name(&self) -> String {
        format!("{}-coloring", self.k)
    }
    fn radius(&self) -> usize {
        1
    }
    fn node_alphabet(&self) -> Vec<u8> {
        (0..self.k).collect()
    }
    fn half_alphabet(&self) -> Vec<()> {
        vec![()]
    }
    fn checker<'a>(&'a self, g: &'a LabeledGraph<N, E>) -> Box<dyn Checker<u8> + 'a> {
        Box::new(ColoringChecker { g })
    }
}

/// Distance-2 coloring (radius 2): nodes within distance two differ.
pub struct Distance2Coloring<N, E> {
    pub k: u8,
    _p: PhantomData<fn(N, E)>,
}

impl<N, E> Distance2Coloring<N, E> {
    pub fn new(k: u8) -> Self {
        Distance2Coloring { k, _p: PhantomData }
    }
}

struct D2Checker<'a, N, E> {
    g: &'a LabeledGraph<N, E>,
}

impl<N, E> Checker<u8> for D2Checker<'_, N, E> {
    fn n(&self) -> usize {
        self.g.n()
    }

    fn check_node(&self, out: &Labeling<u8>, v: NodeId) -> Vec<Violation> {
        let Some(c) = out.node(v) else { return Vec::new() };
        let ball = crate::graph::ball(self.g, &[v], 2);
        ball.into_iter()
            .filter(|&u| u != v && out.node(u) == Some(c))
            .map(|u| Violation::new(v, "d2-coloring", format!("node {u} shares color {c}")))
            .collect()
    }
}

impl<N, E> LclProblem for Distance2Coloring<N, E> {
    type NodeIn = N;
    type EdgeIn = E;
    type Out = u8;
    type HalfOut = ();

    fn name(&self) -> String {
        format!("distance-2 {}-coloring", self.k)
    }
    fn radius(&self) -> usize {
        2
    }
    fn node_alphabet(&self) -> Vec<u8> {
        (0..self.k).collect()
    }
    fn half_alphabet(&self) -> Vec<()> {
        vec![()]
    }
    fn checker<'a>(&'a self, g: &'a LabeledGraph<N, E>) -> Box<dyn Checker<u8> + 'a> {
        Box::new(D2Checker { g })
    }
}

/// Every node picks any of `k` labels; nothing is constrained.
pub struct FreeLabels<N, E> {
    pub k: u8,
    _p: PhantomData<fn(N, E)>,
}

impl<N, E> FreeLabels<N, E> {
    pub fn new(k: u8) -> Self {
        FreeLabels { k, _p: PhantomData }
    }
}

struct FreeChecker {
    n: usize,
}

impl Checker<u8> for FreeChecker {
    fn n(&self) -> usize {
        self.n
    }
    fn check_node(&self, _out: &Labeling<u8>, _v: NodeId) -> Vec<Violation> {
        Vec::new()
    }
}

impl<N, E> LclProblem for FreeLabels<N, E> {
    type NodeIn = N;
    type EdgeIn = E;
    type Out = u8;
    type HalfOut = ();

    fn name(&self) -> String {
        format!("free-{}", self.k)
    }
    fn radius(&self) -> usize {
        0
    }
    fn node_alphabet(&self) -> Vec<u8> {
        (0..self.k).collect()
    }
    fn half_alphabet(&self) -> Vec<()> {
        vec![()]
    }
    fn checker<'a>(&'a self, g: &'a LabeledGraph<N, E>) -> Box<dyn Checker<u8> + 'a> {
        Box::new(FreeChecker { n: g.n() })
    }
}

/// Sinkless orientation with half-edge outputs: the two halves of an edge
/// disagree (`true` = outgoing) and every node of degree ≥ `min_deg` has an
/// outgoing half-edge.
pub struct SinklessOrientation<N, E> {
    pub min_deg: usize,
    _p: PhantomData<fn(N, E)>,
}

impl<N, E> SinklessOrientation<N, E> {
    pub fn new(min_deg: usize) -> Self {
        SinklessOrientation { min_deg, _p: PhantomData }
    }
}

struct SinklessChecker<'a, N, E> {
    g: &'a LabeledGraph<N, E>,
    min_deg: usize,
}

impl<N, E> Checker<(), bool> for SinklessChecker<'_, N, E> {
    fn n(&self) -> usize {
        self.g.n()
    }

    fn check_node(&self, out: &Labeling<(), bool>, v: NodeId) -> Vec<Violation> {
        let mut res = Vec::new();
        let mut all_known = true;
        let mut any_out = false;
        for h in self.g.half_edges(v) {
            let mine = out.half_at(self.g, h.edge, v);
            let theirs = out.half_at(self.g, h.edge, h.other);
            if let (Some(a), Some(b)) = (mine, theirs) {
                if a == b {
                    res.push(Violation::new(v, "orientation", format!("edge {} not oriented", h.edge)));
                }
            }
            match mine {
                Some(true) => any_out = true,
                Some(false) => {}
                None => all_known = false,
            }
        }
        if all_known && !any_out && self.g.degree(v) >= self.min_deg {
            res.push(Violation::new(v, "sinkless", "no outgoing half-edge"));
        }
        res
    }
}

impl<N, E> LclProblem for SinklessOrientation<N, E> {
    type NodeIn = N;
    type EdgeIn = E;
    type Out = ();
    type HalfOut = bool;

    fn name(&self) -> String {
        "sinkless-orientation".into()
    }
    fn radius(&self) -> usize {
        1
    }
    fn node_alphabet(&self) -> Vec<()> {
        vec![()]
    }
    fn half_alphabet(&self) -> Vec<bool> {
        vec![false, true]
    }
    fn checker<'a>(&'a self, g: &'a LabeledGraph<N, E>) -> Box<dyn Checker<(), bool> + 'a> {
        Box::new(SinklessChecker { g, min_deg: self.min_deg })
    }
}
