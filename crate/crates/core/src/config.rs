//! Simulation configuration shared by single runs and sweeps.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::ga::GaConfig;
use crate::grading::{DelayThreshold, GradingThresholds};
use crate::topology::{AttributeRanges, TopologyError, TopologySpec, DEFAULT_BRIDGE_FRACTION};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TopologyConfig {
    /// Fixed region count; derived from the node count when absent.
    pub regions: Option<usize>,
    /// Fixed intra-region edge density; derived from `mean_out_degree` when absent.
    pub edge_density: Option<f64>,
    pub mean_out_degree: f64,
    /// Links per direction between neighbouring regions relative to region size.
    pub bridge_fraction: f64,
    /// Defaults to the bandwidth range.
    pub capacity_range: Option<(f64, f64)>,
}

impl Default for TopologyConfig {
    fn default() -> Self {
        Self {
            regions: None,
            edge_density: None,
            mean_out_degree: 12.0,
            bridge_fraction: DEFAULT_BRIDGE_FRACTION,
            capacity_range: None,
        }
    }
}

impl TopologyConfig {
    /// One region per eight nodes, at most four.
    pub fn regions_for(&self, node_count: usize) -> usize {
        self.regions.unwrap_or((node_count / 8).clamp(1, 4))
    }

    /// Density giving roughly `mean_out_degree` intra-region successors:
    /// the region ring supplies one, the random pairs the rest.
    pub fn density_for(&self, node_count: usize) -> f64 {
        if let Some(d) = self.edge_density {
            return d;
        }
        let regions = self.regions_for(node_count).max(1);
        let size = node_count.div_ceil(regions);
        if size <= 2 {
            return 1.0;
        }
        ((self.mean_out_degree - 1.0).max(0.0) / (size - 2) as f64).clamp(0.01, 1.0)
    }

    pub fn spec_for(&self, node_count: usize, attributes: &AttributeRanges) -> TopologySpec {
        TopologySpec {
            node_count,
            region_count: self.regions_for(node_count),
            edge_density: self.density_for(node_count),
            bridge_fraction: self.bridge_fraction,
            capacity_range: self.capacity_range.unwrap_or(attributes.bandwidth),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HarnessConfig {
    /// Topologies up to this many nodes are checked against the exhaustive oracle.
    pub oracle_node_cap: usize,
    /// Longest path considered by enumeration; unlimited when absent.
    pub max_hops: Option<usize>,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self { oracle_node_cap: 14, max_hops: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    pub node_counts: Vec<usize>,
    pub runs_per_count: usize,
    pub base_seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { node_counts: vec![4, 8, 16, 32, 64, 128, 256], runs_per_count: 25, base_seed: 2012 }
    }
}

/// Everything that influences simulation results.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub topology: TopologyConfig,
    pub attributes: AttributeRanges,
    pub grading: GradingThresholds,
    pub ga: GaConfig,
    pub harness: HarnessConfig,
    pub sweep: SweepConfig,
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), Error> {
        let bad = |m: String| -> Result<(), Error> { Err(TopologyError::InvalidConfig(m).into()) };
        self.ga.validate()?;
        if !(self.topology.mean_out_degree >= 0.0 && self.topology.mean_out_degree.is_finite()) {
            return bad("mean_out_degree must be finite and non-negative".into());
        }
        if !(0.0..=1.0).contains(&self.topology.bridge_fraction) {
            return bad(format!("bridge_fraction {} outside [0, 1]", self.topology.bridge_fraction));
        }
        if let Some(r) = self.topology.regions {
            if r == 0 {
                return bad("regions must be >= 1".into());
            }
        }
        if let Some(d) = self.topology.edge_density {
            if !(d > 0.0 && d <= 1.0) {
                return bad(format!("edge_density {d} outside (0, 1]"));
            }
        }
        let g = &self.grading;
        if !(g.congestion_fraction > 0.0 && g.congestion_fraction <= 1.0) {
            return bad(format!("congestion_fraction {} outside (0, 1]", g.congestion_fraction));
        }
        if let DelayThreshold::Fixed(v) = g.delay {
            if !v.is_finite() {
                return bad("fixed delay threshold must be finite".into());
            }
        }
        if self.sweep.node_counts.is_empty() {
            return bad("sweep node_counts is empty".into());
        }
        if let Some(&n) = self.sweep.node_counts.iter().find(|&&n| n < 2) {
            return bad(format!("sweep node count {n} < 2"));
        }
        Ok(())
    }

    /// Short hex digest of the canonical JSON form.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex::encode(&Sha256::digest(&bytes)[..8])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_topology_shape() {
        let t = TopologyConfig::default();
        assert_eq!(t.regions_for(4), 1);
        assert_eq!(t.regions_for(16), 2);
        assert_eq!(t.regions_for(256), 4);
        assert_eq!(t.density_for(4), 1.0);
        assert!((t.density_for(256) - 11.0 / 62.0).abs() < 1e-15);
    }

    #[test]
    fn digest_tracks_content() {
        let a = SimConfig::default();
        let mut b = a.clone();
        assert_eq!(a.digest(), b.digest());
        b.ga.demand += 1.0;
        assert_ne!(a.digest(), b.digest());
        assert_eq!(a.digest().len(), 16);
    }

    #[test]
    fn partial_json_fills_defaults() {
        let c: SimConfig = serde_json::from_str(r#"{"ga": {"demand": 40.0}}"#).unwrap();
        assert_eq!(c.ga.demand, 40.0);
        assert_eq!(c.ga.generations, 10);
        assert_eq!(c.sweep.runs_per_count, 25);
        c.validate().unwrap();
    }
}
