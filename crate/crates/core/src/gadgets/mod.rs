//! Tree-like gadgets, octopus gadgets, proper instances, lifts of bipartite
//! graphs and their local constraint systems.

mod corpus;
mod lift;
mod mutate;
mod octopus;
mod proper;
mod tree;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, LabeledGraph};

pub use corpus::{base_instances, mutation_corpus, CorpusCase};
pub use lift::{
    compress, head_params, lift, BipartiteInstance, Comp, LiftError, LiftResult,
};
pub use mutate::{apply_mutation, enumerate_mutations, Family, Mutation};
pub use octopus::{
    build_octopus, check_octopus, octopus_violations, OctopusLayout, OctopusSpec, PortLayout, SpecError,
};
pub use proper::{check_proper, proper_ok_mask, proper_violations, proper_violations_all};
pub use tree::{
    build_tree_gadget, build_tree_gadget_with, check_tree, tree_coordinates, tree_index, tree_violations,
    TreeGadgetSpec,
};

/// Half-edge labels: E^tree plus the octopus and inter-octopus links.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeLabel {
    L,
    R,
    P,
    ChL,
    ChR,
    #[serde(rename = "hp_link_1")]
    Hp1,
    #[serde(rename = "hp_link_2")]
    Hp2,
    #[serde(rename = "ph_link")]
    Ph,
    #[serde(rename = "pi_link")]
    Pi,
    #[serde(rename = "ip_link")]
    Ip,
}

impl EdgeLabel {
    pub const TREE: [EdgeLabel; 5] = [EdgeLabel::L, EdgeLabel::R, EdgeLabel::P, EdgeLabel::ChL, EdgeLabel::ChR];
    pub const OCTOPUS: [EdgeLabel; 8] = [
        EdgeLabel::L,
        EdgeLabel::R,
        EdgeLabel::P,
        EdgeLabel::ChL,
        EdgeLabel::ChR,
        EdgeLabel::Hp1,
        EdgeLabel::Hp2,
        EdgeLabel::Ph,
    ];
    pub const PROPER: [EdgeLabel; 10] = [
        EdgeLabel::L,
        EdgeLabel::R,
        EdgeLabel::P,
        EdgeLabel::ChL,
        EdgeLabel::ChR,
        EdgeLabel::Hp1,
        EdgeLabel::Hp2,
        EdgeLabel::Ph,
        EdgeLabel::Pi,
        EdgeLabel::Ip,
    ];

    pub fn is_tree(self) -> bool {
        matches!(self, EdgeLabel::L | EdgeLabel::R | EdgeLabel::P | EdgeLabel::ChL | EdgeLabel::ChR)
    }

    pub fn is_child(self) -> bool {
        matches!(self, EdgeLabel::ChL | EdgeLabel::ChR)
    }

    pub fn is_hp(self) -> bool {
        matches!(self, EdgeLabel::Hp1 | EdgeLabel::Hp2)
    }

    /// hp_link_1, hp_link_2 or ph_link.
    pub fn is_octopus_link(self) -> bool {
        matches!(self, EdgeLabel::Hp1 | EdgeLabel::Hp2 | EdgeLabel::Ph)
    }

    pub fn is_inter_link(self) -> bool {
        matches!(self, EdgeLabel::Pi | EdgeLabel::Ip)
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EdgeLabel::L => "L",
            EdgeLabel::R => "R",
            EdgeLabel::P => "P",
            EdgeLabel::ChL => "ChL",
            EdgeLabel::ChR => "ChR",
            EdgeLabel::Hp1 => "hp_link_1",
            EdgeLabel::Hp2 => "hp_link_2",
            EdgeLabel::Ph => "ph_link",
            EdgeLabel::Pi => "pi_link",
            EdgeLabel::Ip => "ip_link",
        };
        f.write_str(s)
    }
}

/// Node labels. Bare tree gadgets use `Plain`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Plain,
    Head,
    Port,
    #[serde(rename = "inter_octopus")]
    Inter,
}

impl NodeKind {
    pub const OCTOPUS: [NodeKind; 2] = [NodeKind::Head, NodeKind::Port];
    pub const PROPER: [NodeKind; 3] = [NodeKind::Head, NodeKind::Port, NodeKind::Inter];
    pub const ALL: [NodeKind; 4] = [NodeKind::Plain, NodeKind::Head, NodeKind::Port, NodeKind::Inter];
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NodeKind::Plain => "plain",
            NodeKind::Head => "head",
            NodeKind::Port => "port",
            NodeKind::Inter => "inter_octopus",
        };
        f.write_str(s)
    }
}

/// The labeled graphs every gadget-level routine works on.
pub type Instance = LabeledGraph<NodeKind, EdgeLabel>;

/// Per-edge classification used to carve the subgraphs the constraint
/// systems refer to.
#[derive(Clone, Debug)]
pub struct EdgeClasses {
    /// No hp/ph label on either side.
    pub internal: Vec<bool>,
    /// No pi/ip label on either side.
    pub intra: Vec<bool>,
    pub intra_internal: Vec<bool>,
}

impl EdgeClasses {
    pub fn new(g: &Instance) -> Self {
        let internal: Vec<bool> = g
            .edges()
            .iter()
            .map(|e| !e.lu.is_octopus_link() && !e.lv.is_octopus_link())
            .collect();
        let intra: Vec<bool> = g
            .edges()
            .iter()
            .map(|e| !e.lu.is_inter_link() && !e.lv.is_inter_link())
            .collect();
        let intra_internal = internal.iter().zip(&intra).map(|(a, b)| *a && *b).collect();
        EdgeClasses { internal, intra, intra_internal }
    }

    pub fn is_internal(&self, e: EdgeId) -> bool {
        self.internal[e]
    }
}
