//! Node priority classes, the grade scale and region-wise Level-1 selection.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::queueing::congestion_exists;
use crate::topology::{reachable, Edge, NodeId, NodeMetrics, RegionId, Topology};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GradingError {
    #[error("no path from {from} to {to} survives node grading")]
    Disconnected { from: NodeId, to: NodeId },
    #[error("priority {0} outside 1..=6")]
    InvalidPriority(u8),
}

/// Priority class 1 (best) to 6 (no network lifetime).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Priority(u8);

impl Priority {
    pub const BEST: Priority = Priority(1);
    pub const WORST: Priority = Priority(6);

    pub fn new(value: u8) -> Result<Self, GradingError> {
        if (1..=6).contains(&value) {
            Ok(Self(value))
        } else {
            Err(GradingError::InvalidPriority(value))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = Priority> {
        (1..=6).map(Priority)
    }
}

impl TryFrom<u8> for Priority {
    type Error = GradingError;
    fn try_from(v: u8) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<Priority> for u8 {
    fn from(p: Priority) -> u8 {
        p.0
    }
}

impl fmt::Display for Priority {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.0)
    }
}

/// Grade on the −3..=+3 scale; 0 is the most optimal node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Grade(i8);

impl Grade {
    pub fn value(self) -> i8 {
        self.0
    }

    pub fn within(self, lo: i8, hi: i8) -> bool {
        (lo..=hi).contains(&self.0)
    }
}

/// How the "delay exists" cutoff is chosen for a topology.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "value", rename_all = "snake_case")]
pub enum DelayThreshold {
    /// Median node delay of the topology being graded.
    Median,
    Fixed(f64),
}

/// Grading thresholds as configured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GradingThresholds {
    /// A node is alive while its lifetime is strictly above this.
    pub lifetime_threshold: f64,
    /// Node density must be strictly below this cutoff.
    pub density_cutoff: u32,
    pub congestion_fraction: f64,
    pub delay: DelayThreshold,
}

impl Default for GradingThresholds {
    fn default() -> Self {
        Self {
            lifetime_threshold: 0.0,
            density_cutoff: 5,
            congestion_fraction: 0.8,
            delay: DelayThreshold::Median,
        }
    }
}

impl GradingThresholds {
    /// Fix the delay cutoff against a concrete topology.
    pub fn resolve(&self, topology: &Topology) -> PriorityRules {
        let delay_cutoff = match self.delay {
            DelayThreshold::Fixed(v) => v,
            DelayThreshold::Median => {
                let delays: Vec<f64> = topology.nodes.iter().map(|n| n.metrics.delay).collect();
                median(delays)
            }
        };
        PriorityRules {
            lifetime_threshold: self.lifetime_threshold,
            density_cutoff: self.density_cutoff,
            congestion_fraction: self.congestion_fraction,
            delay_cutoff,
        }
    }
}

fn median(mut values: Vec<f64>) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    }
}

/// Thresholds with every cutoff fixed to a number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorityRules {
    pub lifetime_threshold: f64,
    pub density_cutoff: u32,
    pub congestion_fraction: f64,
    pub delay_cutoff: f64,
}

impl Default for PriorityRules {
    fn default() -> Self {
        let t = GradingThresholds::default();
        Self {
            lifetime_threshold: t.lifetime_threshold,
            density_cutoff: t.density_cutoff,
            congestion_fraction: t.congestion_fraction,
            delay_cutoff: 0.0,
        }
    }
}

impl PriorityRules {
    pub fn alive(&self, m: &NodeMetrics) -> bool {
        m.network_lifetime > self.lifetime_threshold
    }

    pub fn sparse(&self, m: &NodeMetrics) -> bool {
        m.node_density < self.density_cutoff
    }

    pub fn uncongested(&self, m: &NodeMetrics) -> bool {
        !congestion_exists(m, self.congestion_fraction)
    }

    pub fn undelayed(&self, m: &NodeMetrics) -> bool {
        m.delay <= self.delay_cutoff
    }
}

/// Nested tests in fixed order: lifetime, density, congestion, resource,
/// delay. The first failing test decides the class.
pub fn priority_of(metrics: &NodeMetrics, rules: &PriorityRules) -> Priority {
    let p = if !rules.alive(metrics) {
        6
    } else if !rules.sparse(metrics) {
        5
    } else if !rules.uncongested(metrics) {
        4
    } else if !metrics.resource_allocated {
        3
    } else if !rules.undelayed(metrics) {
        2
    } else {
        1
    };
    Priority(p)
}

/// Congested and resource-starved classes grade negative; degraded but
/// usable classes grade positive. +3 is never produced.
pub fn grade_of(priority: Priority) -> Grade {
    Grade(match priority.0 {
        1 => 0,
        2 => 1,
        3 => -1,
        4 => -2,
        5 => 2,
        6 => -3,
        _ => unreachable!("Priority is always in 1..=6"),
    })
}

/// The Level-1 output: survivors and the edges they induce.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedSubgraph {
    surviving: BTreeSet<NodeId>,
    induced_edges: Vec<Edge>,
    source: NodeId,
    destination: NodeId,
    adjacency: Vec<Vec<NodeId>>,
}

impl GradedSubgraph {
    pub fn new(topology: &Topology, surviving: BTreeSet<NodeId>) -> Self {
        let induced_edges: Vec<Edge> = topology
            .edges
            .iter()
            .filter(|e| surviving.contains(&e.from) && surviving.contains(&e.to))
            .cloned()
            .collect();
        let mut adjacency = vec![Vec::new(); topology.node_count()];
        for e in &induced_edges {
            adjacency[e.from.index()].push(e.to);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self {
            surviving,
            induced_edges,
            source: topology.source,
            destination: topology.destination,
            adjacency,
        }
    }

    /// The whole topology, unfiltered.
    pub fn full(topology: &Topology) -> Self {
        Self::new(topology, topology.nodes.iter().map(|n| n.id).collect())
    }

    pub fn survivors(&self) -> &BTreeSet<NodeId> {
        &self.surviving
    }

    pub fn induced_edges(&self) -> &[Edge] {
        &self.induced_edges
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn destination(&self) -> NodeId {
        self.destination
    }

    pub fn node_count(&self) -> usize {
        self.surviving.len()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.surviving.contains(&node)
    }

    /// Sorted successors of `node` within the subgraph.
    pub fn successors(&self, node: NodeId) -> &[NodeId] {
        self.adjacency.get(node.index()).map_or(&[], Vec::as_slice)
    }

    pub fn has_edge(&self, from: NodeId, to: NodeId) -> bool {
        self.successors(from).binary_search(&to).is_ok()
    }

    /// Size of the parent topology's id space.
    pub fn id_space(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_connected(&self) -> bool {
        reachable(&self.adjacency, self.source, self.destination, |v| self.contains(v))
    }
}

/// Level-1 selection over the whole topology with thresholds resolved
/// against it.
pub fn level1_select(
    topology: &Topology,
    thresholds: &GradingThresholds,
) -> Result<GradedSubgraph, GradingError> {
    let rules = thresholds.resolve(topology);
    let all: BTreeSet<NodeId> = topology.nodes.iter().map(|n| n.id).collect();
    select_within(topology, &all, &rules)
}

/// Level-1 selection restricted to `candidates`.
///
/// Per region: keep nodes in the three best priority classes present, then
/// those graded within ±2, then those graded 0..=+2. Source and destination
/// are always kept. Fails if they end up disconnected.
pub fn select_within(
    topology: &Topology,
    candidates: &BTreeSet<NodeId>,
    rules: &PriorityRules,
) -> Result<GradedSubgraph, GradingError> {
    let mut by_region: BTreeMap<RegionId, Vec<(NodeId, Priority)>> = BTreeMap::new();
    for &id in candidates {
        let node = &topology.nodes[id.index()];
        by_region
            .entry(node.region)
            .or_default()
            .push((id, priority_of(&node.metrics, rules)));
    }

    let mut surviving = BTreeSet::new();
    for members in by_region.values() {
        let top: BTreeSet<Priority> = members
            .iter()
            .map(|&(_, p)| p)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .take(3)
            .collect();
        surviving.extend(
            members
                .iter()
                .filter(|(_, p)| top.contains(p))
                .filter(|(_, p)| grade_of(*p).within(-2, 2))
                .filter(|(_, p)| grade_of(*p).within(0, 2))
                .map(|&(id, _)| id),
        );
    }
    surviving.insert(topology.source);
    surviving.insert(topology.destination);

    let sub = GradedSubgraph::new(topology, surviving);
    if sub.is_connected() {
        Ok(sub)
    } else {
        Err(GradingError::Disconnected {
            from: topology.source,
            to: topology.destination,
        })
    }
}
