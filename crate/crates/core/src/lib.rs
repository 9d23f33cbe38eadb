//! A LOCAL-model laboratory for locally checkable labelings: labeled graphs,
//! gadget constructions and their local checkers, error-detection problems
//! with logarithmic-round solvers, the iterated GHZ pipeline, a synchronous
//! round simulator, and the bounded-dependence simulation pipeline.

pub mod detectors;
pub mod gadgets;
pub mod graph;
pub mod lcl;
pub mod ghz;
pub mod depsim;
pub mod localsim;
