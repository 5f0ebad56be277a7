use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{reachable, Edge, Node, NodeId, NodeMetrics, RegionId, Topology, TopologyError};
use crate::rng::seeded_rng;

pub const MAX_GENERATION_ATTEMPTS: usize = 100;

/// Structural parameters for [`generate_with`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologySpec {
    pub node_count: usize,
    pub region_count: usize,
    /// Probability that any extra ordered intra-region pair is wired.
    pub edge_density: f64,
    /// Links per direction between neighbouring regions, as a fraction of
    /// the smaller region's size (at least one).
    pub bridge_fraction: f64,
    /// Channel capacities are drawn uniformly from this range.
    pub capacity_range: (f64, f64),
}

pub const DEFAULT_BRIDGE_FRACTION: f64 = 0.25;

impl TopologySpec {
    pub fn new(node_count: usize, region_count: usize, edge_density: f64) -> Self {
        Self {
            node_count,
            region_count,
            edge_density,
            bridge_fraction: DEFAULT_BRIDGE_FRACTION,
            capacity_range: super::AttributeRanges::default().bandwidth,
        }
    }

    fn validate(&self) -> Result<(), TopologyError> {
        let bad = |m: String| Err(TopologyError::InvalidConfig(m));
        if self.node_count < 2 {
            return bad(format!("node_count must be >= 2, got {}", self.node_count));
        }
        if u32::try_from(self.node_count).is_err() {
            return bad(format!("node_count {} too large", self.node_count));
        }
        if self.region_count < 1 {
            return bad("region_count must be >= 1".into());
        }
        if self.node_count < self.region_count {
            return bad(format!(
                "node_count {} smaller than region_count {}",
                self.node_count, self.region_count
            ));
        }
        if !(self.edge_density > 0.0 && self.edge_density <= 1.0) {
            return bad(format!("edge_density must lie in (0, 1], got {}", self.edge_density));
        }
        if !(self.bridge_fraction >= 0.0 && self.bridge_fraction <= 1.0) {
            return bad(format!("bridge_fraction must lie in [0, 1], got {}", self.bridge_fraction));
        }
        let (lo, hi) = self.capacity_range;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return bad(format!("capacity_range ({lo}, {hi}) must satisfy 0 < min <= max"));
        }
        Ok(())
    }
}

/// Generate a region-clustered random digraph with default capacities.
pub fn generate_topology(
    node_count: usize,
    region_count: usize,
    edge_density: f64,
    seed: u64,
) -> Result<Topology, TopologyError> {
    generate_with(&TopologySpec::new(node_count, region_count, edge_density), seed)
}

/// Nodes are dealt round-robin into regions. Each region gets a random
/// Hamiltonian cycle (so it is strongly connected) plus every other ordered
/// pair with probability `edge_density`. Neighbouring regions `r` and `r+1`
/// are joined by at least one link in each direction.
pub fn generate_with(spec: &TopologySpec, seed: u64) -> Result<Topology, TopologyError> {
    spec.validate()?;
    let mut rng = seeded_rng(seed);
    let n = spec.node_count;
    let regions = spec.region_count;
    let members: Vec<Vec<NodeId>> = (0..regions)
        .map(|r| (r..n).step_by(regions).map(|i| NodeId(i as u32)).collect())
        .collect();
    let source = members[0][0];
    let destination = if regions >= 2 {
        members[regions - 1][0]
    } else {
        NodeId(n as u32 - 1)
    };

    for _ in 0..MAX_GENERATION_ATTEMPTS {
        let mut edges: BTreeMap<(NodeId, NodeId), f64> = BTreeMap::new();
        let (cap_lo, cap_hi) = spec.capacity_range;
        let mut add = |rng: &mut crate::rng::SimRng, u: NodeId, v: NodeId| {
            if u != v && !edges.contains_key(&(u, v)) {
                let c = if cap_lo < cap_hi { rng.gen_range(cap_lo..=cap_hi) } else { cap_lo };
                edges.insert((u, v), c);
            }
        };

        for region in &members {
            if region.len() >= 2 {
                let mut ring = region.clone();
                ring.shuffle(&mut rng);
                for i in 0..ring.len() {
                    add(&mut rng, ring[i], ring[(i + 1) % ring.len()]);
                }
            }
            for &u in region {
                for &v in region {
                    if u != v && rng.gen_bool(spec.edge_density) {
                        add(&mut rng, u, v);
                    }
                }
            }
        }

        for pair in members.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let links = ((spec.bridge_fraction * a.len().min(b.len()) as f64).round() as usize).max(1);
            for _ in 0..links {
                let (u, v) = (*a.choose(&mut rng).unwrap(), *b.choose(&mut rng).unwrap());
                add(&mut rng, u, v);
                let (v, u) = (*b.choose(&mut rng).unwrap(), *a.choose(&mut rng).unwrap());
                add(&mut rng, v, u);
            }
        }

        let edges: Vec<Edge> = edges
            .into_iter()
            .map(|((from, to), capacity)| Edge { from, to, capacity })
            .collect();
        let mut topo = Topology {
            nodes: (0..n)
                .map(|i| Node {
                    id: NodeId(i as u32),
                    region: RegionId((i % regions) as u32),
                    metrics: NodeMetrics::default(),
                })
                .collect(),
            edges,
            source,
            destination,
            seed,
        };
        let degrees = topo.in_degrees();
        for (node, deg) in topo.nodes.iter_mut().zip(degrees) {
            node.metrics.node_density = deg;
        }
        if reachable(&topo.adjacency(), source, destination, |_| true) {
            return Ok(topo);
        }
    }
    Err(TopologyError::GenerationFailed { retries: MAX_GENERATION_ATTEMPTS })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_digraph_on_four_nodes() {
        let t = generate_topology(4, 1, 1.0, 1).unwrap();
        assert_eq!(t.edge_count(), 12);
        for node in &t.nodes {
            assert_eq!(t.in_degree(node.id).unwrap(), 3);
            assert_eq!(node.metrics.node_density, 3);
        }
        t.validate().unwrap();
    }

    #[test]
    fn smallest_legal_topology() {
        let t = generate_topology(2, 1, 1.0, 7).unwrap();
        let pairs: Vec<_> = t.edges.iter().map(|e| (e.from.0, e.to.0)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 0)]);
        assert_eq!((t.source, t.destination), (NodeId(0), NodeId(1)));
    }

    #[test]
    fn regional_topology_is_reachable() {
        let t = generate_topology(32, 4, 0.2, 42).unwrap();
        t.validate().unwrap();
        assert!(t.is_reachable());
        assert_ne!(t.nodes[t.source.index()].region, t.nodes[t.destination.index()].region);
        assert_eq!(t.region_count(), 4);
    }

    #[test]
    fn region_sizes_are_balanced() {
        let t = generate_topology(30, 4, 0.3, 9).unwrap();
        let sizes: Vec<usize> = (0..4).map(|r| t.members_of(RegionId(r)).count()).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 30);
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    }

    #[test]
    fn rejects_bad_preconditions() {
        for (n, r, d) in [(1, 1, 0.5), (4, 0, 0.5), (3, 4, 0.5), (4, 1, 0.0), (4, 1, 1.5)] {
            assert!(
                matches!(generate_topology(n, r, d, 0), Err(TopologyError::InvalidConfig(_))),
                "({n},{r},{d}) should be rejected"
            );
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_topology(40, 3, 0.15, 5).unwrap();
        let b = generate_topology(40, 3, 0.15, 5).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, generate_topology(40, 3, 0.15, 6).unwrap());
    }
}
