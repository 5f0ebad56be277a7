//! Quality-graded two-level routing.
//!
//! Nodes are first graded from queueing-derived metrics and filtered region
//! by region (Level-1); a genetic algorithm then searches the surviving
//! subgraph for a source to destination path with sufficient bottleneck
//! bandwidth (Level-2). The [`harness`] module runs graded and ungraded
//! searches side by side and checks them against an exhaustive oracle.

pub mod config;
pub mod error;
pub mod ga;
pub mod grading;
pub mod harness;
pub mod queueing;
pub mod rng;
pub mod topology;

pub use crate::config::SimConfig;
pub use crate::error::Error;
pub use crate::ga::{Chromosome, FitnessReport, GaConfig, Population};
pub use crate::grading::{Grade, GradedSubgraph, GradingThresholds, Priority};
pub use crate::harness::{Mode, RunReport, SweepReport};
pub use crate::topology::{Edge, Node, NodeId, NodeMetrics, RegionId, Topology};
