//! Bounded-dependence outcomes and their classical simulation: clustering,
//! partitioning of the leftover set, independent sampling, brute-force
//! completion, and the online conditional-sampling adapter.

mod cluster;
mod online;
mod outcome;
mod simulate;

pub use cluster::{cluster, partition_d, Clustering, DPartition};
pub use online::{online_adapter, online_law};
pub use outcome::{sub_seed, Enumerable, Law, Outcome, QuantumPi, TableOutcome};
pub use simulate::{complete_clusters, sample_d, sample_d_law, simulate, SimOptions, SimResult, StepLocality};
