//! Exhaustive reference search used to score the GA.

use serde::{Deserialize, Serialize};

use crate::ga::{Chromosome, GaError};
use crate::grading::GradedSubgraph;
use crate::topology::{NodeId, Topology};

/// What two routes are compared on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RouteScore {
    pub feasible: bool,
    pub hops: usize,
    pub bottleneck: f64,
}

impl RouteScore {
    pub fn of(path: &[NodeId], topology: &Topology, demand: f64) -> Self {
        let bottleneck = path.iter().map(|&n| topology.bandwidth(n)).fold(f64::INFINITY, f64::min);
        Self { feasible: bottleneck >= demand, hops: path.len() - 1, bottleneck }
    }
}

/// Best simple path by brute force.
///
/// Among paths whose bottleneck meets `demand`, the fewest hops wins, then
/// the widest bottleneck. If none meets it, the widest bottleneck wins, then
/// the fewest hops. Lexicographic order settles the rest.
pub fn oracle_best_path(
    subgraph: &GradedSubgraph,
    topology: &Topology,
    demand: f64,
) -> Result<Chromosome, GaError> {
    let mut best: Option<(Vec<NodeId>, RouteScore)> = None;
    let mut path = vec![subgraph.source()];
    let mut on_path = vec![false; subgraph.id_space()];
    on_path[subgraph.source().index()] = true;
    walk(subgraph, &mut path, &mut on_path, &mut |p| {
        let score = RouteScore::of(p, topology, demand);
        let better = match &best {
            None => true,
            Some((bp, bs)) => beats(&score, p, bs, bp),
        };
        if better {
            best = Some((p.to_vec(), score));
        }
    });
    let (path, _) = best.ok_or(GaError::NoRoute)?;
    Chromosome::new(path, subgraph)
}

fn beats(a: &RouteScore, a_path: &[NodeId], b: &RouteScore, b_path: &[NodeId]) -> bool {
    if a.feasible != b.feasible {
        return a.feasible;
    }
    let key = |s: &RouteScore| {
        if s.feasible {
            (s.hops as f64, -s.bottleneck)
        } else {
            (-s.bottleneck, s.hops as f64)
        }
    };
    let (ka, kb) = (key(a), key(b));
    if ka != kb {
        return ka < kb;
    }
    a_path < b_path
}

fn walk(
    subgraph: &GradedSubgraph,
    path: &mut Vec<NodeId>,
    on_path: &mut [bool],
    visit: &mut impl FnMut(&[NodeId]),
) {
    let here = *path.last().unwrap();
    if here == subgraph.destination() {
        visit(path);
        return;
    }
    for &next in subgraph.successors(here) {
        if on_path[next.index()] {
            continue;
        }
        on_path[next.index()] = true;
        path.push(next);
        walk(subgraph, path, on_path, visit);
        path.pop();
        on_path[next.index()] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{Edge, Node, NodeMetrics, RegionId};

    /// 0 -> 1 -> 4 (bottleneck 50) and 0 -> 2 -> 3 -> 4 (bottleneck 90).
    fn two_routes() -> Topology {
        let bw = [100.0, 50.0, 90.0, 95.0, 100.0];
        let pairs = [(0, 1), (0, 2), (1, 4), (2, 3), (3, 4)];
        let mut t = Topology {
            nodes: (0..5u32)
                .map(|i| Node {
                    id: NodeId(i),
                    region: RegionId(0),
                    metrics: NodeMetrics { bandwidth: bw[i as usize], ..Default::default() },
                })
                .collect(),
            edges: pairs
                .iter()
                .map(|&(a, b)| Edge { from: NodeId(a), to: NodeId(b), capacity: 10.0 })
                .collect(),
            source: NodeId(0),
            destination: NodeId(4),
            seed: 0,
        };
        let deg = t.in_degrees();
        for (n, d) in t.nodes.iter_mut().zip(deg) {
            n.metrics.node_density = d;
        }
        t
    }

    fn ids(c: &Chromosome) -> Vec<u32> {
        c.path().iter().map(|n| n.0).collect()
    }

    #[test]
    fn fewer_hops_when_both_feasible() {
        let t = two_routes();
        let g = GradedSubgraph::full(&t);
        assert_eq!(ids(&oracle_best_path(&g, &t, 40.0).unwrap()), vec![0, 1, 4]);
    }

    #[test]
    fn only_feasible_route_wins() {
        let t = two_routes();
        let g = GradedSubgraph::full(&t);
        assert_eq!(ids(&oracle_best_path(&g, &t, 60.0).unwrap()), vec![0, 2, 3, 4]);
    }

    #[test]
    fn widest_route_when_nothing_is_feasible() {
        let t = two_routes();
        let g = GradedSubgraph::full(&t);
        assert_eq!(ids(&oracle_best_path(&g, &t, 500.0).unwrap()), vec![0, 2, 3, 4]);
    }

    #[test]
    fn single_route_and_no_route() {
        let mut t = two_routes();
        t.edges.retain(|e| e.from != NodeId(2));
        let g = GradedSubgraph::full(&t);
        assert_eq!(ids(&oracle_best_path(&g, &t, 500.0).unwrap()), vec![0, 1, 4]);
        t.edges.retain(|e| e.from != NodeId(1));
        let g = GradedSubgraph::full(&t);
        assert_eq!(oracle_best_path(&g, &t, 0.0), Err(GaError::NoRoute));
    }
}
