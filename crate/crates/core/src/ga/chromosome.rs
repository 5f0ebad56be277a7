use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::GaError;
use crate::grading::GradedSubgraph;
use crate::topology::{NodeId, Topology};

/// A loop-free source-to-destination path; genes are node ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Chromosome {
    path: Vec<NodeId>,
}

impl Chromosome {
    /// Validate `path` against the subgraph's endpoints, survivors and edges.
    pub fn new(path: Vec<NodeId>, subgraph: &GradedSubgraph) -> Result<Self, GaError> {
        check_path(&path, subgraph)?;
        Ok(Self { path })
    }

    pub(crate) fn from_valid(path: Vec<NodeId>) -> Self {
        Self { path }
    }

    pub fn path(&self) -> &[NodeId] {
        &self.path
    }

    pub fn into_path(self) -> Vec<NodeId> {
        self.path
    }

    pub fn hops(&self) -> usize {
        self.path.len() - 1
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.path.contains(&node)
    }

    /// Smallest node bandwidth along the path.
    pub fn bottleneck(&self, topology: &Topology) -> f64 {
        self.path
            .iter()
            .map(|&n| topology.bandwidth(n))
            .fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn check_path(path: &[NodeId], subgraph: &GradedSubgraph) -> Result<(), GaError> {
    let bad = |m: String| Err(GaError::InvalidPath(m));
    if path.len() < 2 {
        return bad(format!("length {} < 2", path.len()));
    }
    if path[0] != subgraph.source() || *path.last().unwrap() != subgraph.destination() {
        return bad("endpoints differ from source/destination".into());
    }
    let mut seen = HashSet::with_capacity(path.len());
    for &n in path {
        if !subgraph.contains(n) {
            return bad(format!("node {n} not in subgraph"));
        }
        if !seen.insert(n) {
            return bad(format!("node {n} repeated"));
        }
    }
    for w in path.windows(2) {
        if !subgraph.has_edge(w[0], w[1]) {
            return bad(format!("missing edge {}->{}", w[0], w[1]));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Population {
    pub members: Vec<Chromosome>,
    pub generation: usize,
}

impl Population {
    pub fn new(members: Vec<Chromosome>) -> Self {
        Self { members, generation: 0 }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn distinct_nodes(&self) -> usize {
        self.members
            .iter()
            .flat_map(|c| c.path().iter().copied())
            .collect::<HashSet<_>>()
            .len()
    }
}
