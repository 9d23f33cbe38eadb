//! Error-detection problems Π^badTree, Π^badOctopus and Π^badGraph with
//! their checkers and O(log n)-round solvers.

mod audit;
mod badgraph;
mod badoctopus;
mod badtree;

pub use audit::{
    audit_badgraph, audit_badoctopus, audit_badtree, fit_locality, octopus_required, Audit, LocalityFit,
};
pub use badgraph::{
    badgraph_items, bot_subgraph, check_badgraph, intra_mask, solve_badgraph, BadGraph, GraphContext, GraphOut, GraphRun,
    PROPER_GATHER,
};
pub use badoctopus::{
    badoctopus_items, check_badoctopus, enumerate_badoctopus, run_badoctopus, solve_badoctopus, stage_marks, BadOctopus, OctContext, OctOut,
    OctRun,
};
pub use badtree::{
    badtree_item, badtree_radius, broken_components, check_badtree, log_budget, run_badtree_stage, solve_badtree,
    BadTree, Dir, TreeOut, TreeRun, TREE_GATHER,
};
