//! Shared fixtures for the routing benchmarks.

use gradnet_core::harness::build_topology;
use gradnet_core::{SimConfig, Topology};

/// A populated topology of `node_count` nodes under the default configuration.
pub fn fixture(node_count: usize, seed: u64) -> Topology {
    build_topology(&SimConfig::default(), node_count, seed).expect("fixture topology")
}
