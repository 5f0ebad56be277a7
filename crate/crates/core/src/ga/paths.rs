use std::collections::VecDeque;

use super::{Chromosome, GaError};
use crate::grading::GradedSubgraph;
use crate::topology::NodeId;

/// Simple source-to-destination paths in shortest-first order, ties broken
/// lexicographically by node sequence, truncated to `max_paths`.
///
/// Paths are produced one hop count at a time by a depth-first search that
/// visits successors in ascending id order and prunes any branch whose
/// breadth-first distance to the destination exceeds the hops left, so
/// enumeration stops as soon as `max_paths` paths are found.
pub fn enumerate_paths(
    subgraph: &GradedSubgraph,
    max_paths: usize,
    max_hops: usize,
) -> Result<Vec<Chromosome>, GaError> {
    let dist = distances_to(subgraph, subgraph.destination());
    let source = subgraph.source();
    let Some(shortest) = dist[source.index()] else {
        return Err(GaError::NoRoute);
    };
    let longest = max_hops.min(subgraph.node_count().saturating_sub(1));
    if shortest > longest || max_paths == 0 {
        return Err(GaError::NoRoute);
    }

    let mut search = Search {
        subgraph,
        dist: &dist,
        on_path: vec![false; subgraph.id_space()],
        path: vec![source],
        found: Vec::new(),
        limit: max_paths,
    };
    search.on_path[source.index()] = true;
    for hops in shortest..=longest {
        search.extend(hops);
        if search.found.len() >= max_paths {
            break;
        }
    }
    if search.found.is_empty() {
        return Err(GaError::NoRoute);
    }
    Ok(search.found.into_iter().map(Chromosome::from_valid).collect())
}

struct Search<'a> {
    subgraph: &'a GradedSubgraph,
    dist: &'a [Option<usize>],
    on_path: Vec<bool>,
    path: Vec<NodeId>,
    found: Vec<Vec<NodeId>>,
    limit: usize,
}

impl Search<'_> {
    fn extend(&mut self, remaining: usize) {
        let here = *self.path.last().unwrap();
        let destination = self.subgraph.destination();
        for &next in self.subgraph.successors(here) {
            if self.found.len() >= self.limit {
                return;
            }
            if self.on_path[next.index()] {
                continue;
            }
            if next == destination {
                if remaining == 1 {
                    let mut p = self.path.clone();
                    p.push(next);
                    self.found.push(p);
                }
                continue;
            }
            match self.dist[next.index()] {
                Some(d) if d < remaining => {}
                _ => continue,
            }
            self.on_path[next.index()] = true;
            self.path.push(next);
            self.extend(remaining - 1);
            self.path.pop();
            self.on_path[next.index()] = false;
        }
    }
}

/// Hop distance from every surviving node to `target` along subgraph edges.
fn distances_to(subgraph: &GradedSubgraph, target: NodeId) -> Vec<Option<usize>> {
    let n = subgraph.id_space();
    let mut reverse = vec![Vec::new(); n];
    for e in subgraph.induced_edges() {
        reverse[e.to.index()].push(e.from);
    }
    let mut dist = vec![None; n];
    dist[target.index()] = Some(0);
    let mut queue = VecDeque::from([target]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v.index()].unwrap();
        for &u in &reverse[v.index()] {
            if dist[u.index()].is_none() {
                dist[u.index()] = Some(d + 1);
                queue.push_back(u);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{generate_topology, Edge, Node, NodeMetrics, RegionId, Topology};

    fn topo(n: u32, pairs: &[(u32, u32)], source: u32, destination: u32) -> Topology {
        let mut edges: Vec<Edge> = pairs
            .iter()
            .map(|&(a, b)| Edge { from: NodeId(a), to: NodeId(b), capacity: 10.0 })
            .collect();
        edges.sort_by_key(|e| (e.from, e.to));
        let mut t = Topology {
            nodes: (0..n)
                .map(|i| Node { id: NodeId(i), region: RegionId(0), metrics: NodeMetrics::default() })
                .collect(),
            edges,
            source: NodeId(source),
            destination: NodeId(destination),
            seed: 0,
        };
        let deg = t.in_degrees();
        for (node, d) in t.nodes.iter_mut().zip(deg) {
            node.metrics.node_density = d;
        }
        t
    }

    fn as_u32(paths: &[Chromosome]) -> Vec<Vec<u32>> {
        paths.iter().map(|c| c.path().iter().map(|n| n.0).collect()).collect()
    }

    #[test]
    fn two_disjoint_routes() {
        let t = topo(4, &[(0, 1), (1, 3), (0, 2), (2, 3)], 0, 3);
        let paths = enumerate_paths(&GradedSubgraph::full(&t), 100, 10).unwrap();
        assert_eq!(as_u32(&paths), vec![vec![0, 1, 3], vec![0, 2, 3]]);
    }

    #[test]
    fn complete_k4_has_five_paths() {
        let mut t = generate_topology(4, 1, 1.0, 1).unwrap();
        t.destination = NodeId(3);
        let paths = enumerate_paths(&GradedSubgraph::full(&t), 100, 10).unwrap();
        assert_eq!(
            as_u32(&paths),
            vec![vec![0, 3], vec![0, 1, 3], vec![0, 2, 3], vec![0, 1, 2, 3], vec![0, 2, 1, 3]]
        );
    }

    #[test]
    fn truncation_and_hop_cap() {
        let t = generate_topology(4, 1, 1.0, 1).unwrap();
        let g = GradedSubgraph::full(&t);
        assert_eq!(as_u32(&enumerate_paths(&g, 2, 10).unwrap()), vec![vec![0, 3], vec![0, 1, 3]]);
        assert_eq!(enumerate_paths(&g, 100, 2).unwrap().len(), 3);
    }

    #[test]
    fn disconnected_source() {
        let t = topo(4, &[(1, 3), (2, 3), (3, 0)], 0, 3);
        assert_eq!(enumerate_paths(&GradedSubgraph::full(&t), 10, 10), Err(GaError::NoRoute));
    }

    #[test]
    fn every_path_is_a_valid_chromosome() {
        let t = generate_topology(12, 2, 0.4, 8).unwrap();
        let g = GradedSubgraph::full(&t);
        let paths = enumerate_paths(&g, 50, 11).unwrap();
        assert_eq!(paths.len(), 50);
        for w in paths.windows(2) {
            assert!((w[0].hops(), w[0].path()) < (w[1].hops(), w[1].path()));
        }
        for c in &paths {
            Chromosome::new(c.path().to_vec(), &g).unwrap();
        }
    }
}
