//! Region-partitioned directed network model.
//!
//! A [`Topology`] is a plain value: nodes carry their region and the metric
//! vector used for grading, edges carry a channel capacity. Generation and
//! attribute assignment live in the submodules and are pure functions of
//! their arguments.

mod attributes;
mod generate;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use self::attributes::{assign_attributes, assign_attributes_with, AttributeRanges};
pub use self::generate::{
    generate_topology, generate_with, TopologySpec, DEFAULT_BRIDGE_FRACTION, MAX_GENERATION_ATTEMPTS,
};

#[derive(Debug, Error)]
pub enum TopologyError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("no source to destination connectivity after {retries} attempts")]
    GenerationFailed { retries: usize },
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("malformed topology: {0}")]
    Malformed(String),
    #[error("topology i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("topology json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RegionId(pub u32);

impl RegionId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Per-node attribute vector consumed by the priority model and the GA.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeMetrics {
    pub bandwidth: f64,
    pub network_lifetime: f64,
    pub resource_allocated: bool,
    /// In-degree of the node in its topology.
    pub node_density: u32,
    pub traffic_load: f64,
    /// Seconds, from the node's outgoing channel terms of the network delay sum.
    pub delay: f64,
}

impl Default for NodeMetrics {
    fn default() -> Self {
        Self {
            bandwidth: 1.0,
            network_lifetime: 1.0,
            resource_allocated: true,
            node_density: 0,
            traffic_load: 0.0,
            delay: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    pub region: RegionId,
    pub metrics: NodeMetrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub from: NodeId,
    pub to: NodeId,
    pub capacity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub nodes: Vec<Node>,
    /// Sorted by `(from, to)`.
    pub edges: Vec<Edge>,
    pub source: NodeId,
    pub destination: NodeId,
    pub seed: u64,
}

impl Topology {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn region_count(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| n.region.index() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn node(&self, id: NodeId) -> Result<&Node, TopologyError> {
        self.nodes.get(id.index()).ok_or(TopologyError::UnknownNode(id))
    }

    pub fn metrics(&self, id: NodeId) -> &NodeMetrics {
        &self.nodes[id.index()].metrics
    }

    pub fn bandwidth(&self, id: NodeId) -> f64 {
        self.nodes[id.index()].metrics.bandwidth
    }

    /// Number of edges terminating at `node`.
    pub fn in_degree(&self, node: NodeId) -> Result<usize, TopologyError> {
        self.node(node)?;
        Ok(self.edges.iter().filter(|e| e.to == node).count())
    }

    pub fn in_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.nodes.len()];
        for e in &self.edges {
            deg[e.to.index()] += 1;
        }
        deg
    }

    pub fn out_edges(&self, node: NodeId) -> impl Iterator<Item = &Edge> {
        // edges are sorted by `from`, so the out-edges form one contiguous run
        let start = self.edges.partition_point(|e| e.from < node);
        self.edges[start..].iter().take_while(move |e| e.from == node)
    }

    /// Sorted successor lists indexed by node.
    pub fn adjacency(&self) -> Vec<Vec<NodeId>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.from.index()].push(e.to);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn members_of(&self, region: RegionId) -> impl Iterator<Item = &Node> {
        self.nodes.iter().filter(move |n| n.region == region)
    }

    pub fn is_reachable(&self) -> bool {
        reachable(&self.adjacency(), self.source, self.destination, |_| true)
    }

    /// Check every structural invariant of the model.
    pub fn validate(&self) -> Result<(), TopologyError> {
        let n = self.nodes.len();
        if n < 2 {
            return Err(TopologyError::Malformed(format!("{n} nodes, need at least 2")));
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if node.id.index() != i {
                return Err(TopologyError::Malformed(format!(
                    "node at position {i} has id {}",
                    node.id
                )));
            }
            let m = &node.metrics;
            if !(m.bandwidth > 0.0 && m.bandwidth.is_finite()) {
                return Err(TopologyError::Malformed(format!("node {i}: bandwidth must be > 0")));
            }
            for (name, v) in [
                ("traffic_load", m.traffic_load),
                ("delay", m.delay),
                ("network_lifetime", m.network_lifetime),
            ] {
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(TopologyError::Malformed(format!(
                        "node {i}: {name} must be finite and non-negative"
                    )));
                }
            }
        }
        if self.source == self.destination {
            return Err(TopologyError::Malformed("source equals destination".into()));
        }
        self.node(self.source)?;
        self.node(self.destination)?;
        let mut seen = BTreeSet::new();
        for e in &self.edges {
            self.node(e.from)?;
            self.node(e.to)?;
            if e.from == e.to {
                return Err(TopologyError::Malformed(format!("self-loop at {}", e.from)));
            }
            if !seen.insert((e.from, e.to)) {
                return Err(TopologyError::Malformed(format!("duplicate edge {}->{}", e.from, e.to)));
            }
            if !(e.capacity > 0.0 && e.capacity.is_finite()) {
                return Err(TopologyError::Malformed(format!(
                    "edge {}->{}: capacity must be > 0",
                    e.from, e.to
                )));
            }
        }
        if !self.edges.windows(2).all(|w| (w[0].from, w[0].to) < (w[1].from, w[1].to)) {
            return Err(TopologyError::Malformed("edges are not sorted".into()));
        }
        for (node, deg) in self.nodes.iter().zip(self.in_degrees()) {
            if node.metrics.node_density != deg {
                return Err(TopologyError::Malformed(format!(
                    "node {}: node_density {} but in-degree {deg}",
                    node.id, node.metrics.node_density
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String, TopologyError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self, TopologyError> {
        let topo: Topology = serde_json::from_str(text)?;
        topo.validate()?;
        Ok(topo)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), TopologyError> {
        let mut text = self.to_json()?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TopologyError> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    /// Hex SHA-256 of the canonical JSON encoding.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("topology serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}

/// Breadth-first reachability restricted to nodes accepted by `allowed`.
pub(crate) fn reachable(
    adj: &[Vec<NodeId>],
    from: NodeId,
    to: NodeId,
    allowed: impl Fn(NodeId) -> bool,
) -> bool {
    if !allowed(from) || !allowed(to) {
        return false;
    }
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([from]);
    seen[from.index()] = true;
    while let Some(u) = queue.pop_front() {
        if u == to {
            return true;
        }
        for &v in &adj[u.index()] {
            if !seen[v.index()] && allowed(v) {
                seen[v.index()] = true;
                queue.push_back(v);
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hub(n: u32) -> Topology {
        let mut nodes: Vec<Node> = (0..n)
            .map(|i| Node { id: NodeId(i), region: RegionId(0), metrics: NodeMetrics::default() })
            .collect();
        let edges: Vec<Edge> = (1..n)
            .map(|i| Edge { from: NodeId(i), to: NodeId(0), capacity: 10.0 })
            .collect();
        nodes[0].metrics.node_density = n - 1;
        Topology { nodes, edges, source: NodeId(1), destination: NodeId(0), seed: 0 }
    }

    #[test]
    fn hub_in_degree() {
        let t = hub(8);
        assert_eq!(t.in_degree(NodeId(0)).unwrap(), 7);
        assert_eq!(t.in_degree(NodeId(3)).unwrap(), 0);
        assert!(matches!(t.in_degree(NodeId(8)), Err(TopologyError::UnknownNode(_))));
        t.validate().unwrap();
    }

    #[test]
    fn out_edges_are_contiguous() {
        let t = generate_topology(6, 1, 1.0, 3).unwrap();
        for node in &t.nodes {
            let outs: Vec<_> = t.out_edges(node.id).map(|e| e.to).collect();
            assert_eq!(outs.len(), 5);
            assert!(outs.iter().all(|&v| v != node.id));
        }
    }

    #[test]
    fn validate_rejects_self_loop_and_density_mismatch() {
        let mut t = hub(3);
        t.edges.push(Edge { from: NodeId(2), to: NodeId(2), capacity: 1.0 });
        assert!(t.validate().is_err());

        let mut t = hub(3);
        t.nodes[0].metrics.node_density = 5;
        assert!(t.validate().is_err());
    }
}
