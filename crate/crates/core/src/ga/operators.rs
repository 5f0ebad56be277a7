//! Crossover, mutation and repair.
//!
//! The crossover operators work on raw gene sequences and may emit
//! sequences that are not valid paths; [`repair`] turns them back into
//! chromosomes or rejects them.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use super::chromosome::check_path;
use super::{Chromosome, GaError};
use crate::grading::GradedSubgraph;
use crate::topology::NodeId;

/// Positional single-point crossover: the first `point` genes of one parent
/// followed by the tail of the other. Duplicates are left in place.
pub fn single_point_crossover<T: Clone>(
    p1: &[T],
    p2: &[T],
    point: usize,
) -> Result<(Vec<T>, Vec<T>), GaError> {
    let limit = p1.len().min(p2.len());
    if point < 1 || point >= limit {
        return Err(GaError::BadCutPoint { point, limit });
    }
    let o1 = p1[..point].iter().chain(&p2[point..]).cloned().collect();
    let o2 = p2[..point].iter().chain(&p1[point..]).cloned().collect();
    Ok((o1, o2))
}

/// Partially mapped crossover exchanging the segment of 0-based indices
/// `a..b`. Genes outside the segment come from the same-side parent and are
/// chased through the segment mapping until they no longer collide.
pub fn pmx_crossover<T: Copy + Eq + Hash>(
    p1: &[T],
    p2: &[T],
    (a, b): (usize, usize),
) -> Result<(Vec<T>, Vec<T>), GaError> {
    let len = p1.len();
    if p2.len() != len || !is_permutation_pair(p1, p2) {
        return Err(GaError::NotPermutation);
    }
    if !(1 <= a && a < b && b <= len) {
        return Err(GaError::BadCutPoints { a, b, len });
    }
    Ok((pmx_child(p1, p2, a, b), pmx_child(p2, p1, a, b)))
}

/// Child of `base` receiving `donor`'s segment.
fn pmx_child<T: Copy + Eq + Hash>(base: &[T], donor: &[T], a: usize, b: usize) -> Vec<T> {
    let mapping: HashMap<T, T> = (a..b).map(|i| (donor[i], base[i])).collect();
    base.iter()
        .enumerate()
        .map(|(i, &gene)| {
            if (a..b).contains(&i) {
                return donor[i];
            }
            let mut g = gene;
            while let Some(&next) = mapping.get(&g) {
                g = next;
            }
            g
        })
        .collect()
}

fn is_permutation_pair<T: Eq + Hash>(p1: &[T], p2: &[T]) -> bool {
    let s1: HashSet<&T> = p1.iter().collect();
    let s2: HashSet<&T> = p2.iter().collect();
    s1.len() == p1.len() && s2.len() == p2.len() && s1 == s2
}

/// Single-point crossover cut at a shared interior node.
///
/// Among the interior nodes both parents visit, the one whose cut (just after
/// it in `p1`) lies closest to `preferred_point` is used. When it sits at the
/// same index in both parents this is exactly [`single_point_crossover`];
/// otherwise each head is joined to the other parent's tail at that node.
/// Returns `None` when the parents share no interior node.
pub fn common_node_crossover<T: Copy + Eq + Hash>(
    p1: &[T],
    p2: &[T],
    preferred_point: usize,
) -> Option<(Vec<T>, Vec<T>)> {
    if p1.len() < 3 || p2.len() < 3 {
        return None;
    }
    let pos2: HashMap<T, usize> = p2[1..p2.len() - 1]
        .iter()
        .enumerate()
        .map(|(k, &g)| (g, k + 1))
        .collect();
    let (i, j) = (1..p1.len() - 1)
        .filter_map(|i| pos2.get(&p1[i]).map(|&j| (i, j)))
        .min_by_key(|&(i, _)| ((i + 1).abs_diff(preferred_point), i))?;
    if i == j {
        return single_point_crossover(p1, p2, i + 1).ok();
    }
    let o1 = p1[..=i].iter().chain(&p2[j + 1..]).copied().collect();
    let o2 = p2[..=j].iter().chain(&p1[i + 1..]).copied().collect();
    Some((o1, o2))
}

/// Insert `node` at `position` (never before the source or after the
/// destination). The result must still be a valid chromosome.
pub fn insertion_mutation(
    chromosome: &Chromosome,
    node: NodeId,
    position: usize,
    subgraph: &GradedSubgraph,
) -> Result<Chromosome, GaError> {
    if chromosome.contains(node) {
        return Err(GaError::DuplicateNode(node));
    }
    if !subgraph.contains(node) {
        return Err(GaError::MutationRejected(format!("node {node} is not a survivor")));
    }
    if position < 1 || position >= chromosome.len() {
        return Err(GaError::MutationRejected(format!(
            "position {position} outside 1..={}",
            chromosome.len() - 1
        )));
    }
    let mut path = chromosome.path().to_vec();
    path.insert(position, node);
    check_path(&path, subgraph).map_err(|e| GaError::MutationRejected(e.to_string()))?;
    Ok(Chromosome::from_valid(path))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Repair {
    Valid(Chromosome),
    Rejected,
}

impl Repair {
    pub fn ok(self) -> Option<Chromosome> {
        match self {
            Repair::Valid(c) => Some(c),
            Repair::Rejected => None,
        }
    }
}

/// Cut out loops, then validate.
///
/// Repeatedly finds the first gene that occurs a second time and removes
/// everything after its first occurrence up to and including the second,
/// until no gene repeats. The loop-free result is accepted only if it is a
/// valid path in `subgraph`.
pub fn repair(raw: &[NodeId], subgraph: &GradedSubgraph) -> Repair {
    let mut genes = raw.to_vec();
    while let Some((first, second)) = first_repeat(&genes) {
        genes.drain(first + 1..=second);
    }
    match check_path(&genes, subgraph) {
        Ok(()) => Repair::Valid(Chromosome::from_valid(genes)),
        Err(_) => Repair::Rejected,
    }
}

fn first_repeat(genes: &[NodeId]) -> Option<(usize, usize)> {
    let mut seen = HashMap::with_capacity(genes.len());
    for (k, &g) in genes.iter().enumerate() {
        if let Some(&first) = seen.get(&g) {
            return Some((first, k));
        }
        seen.insert(g, k);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::generate_topology;
    use proptest::prelude::*;

    const P1: [u32; 7] = [1, 2, 3, 4, 5, 6, 7];
    const P2: [u32; 7] = [1, 3, 4, 6, 2, 5, 7];

    fn ids(v: &[u32]) -> Vec<NodeId> {
        v.iter().map(|&i| NodeId(i)).collect()
    }

    /// Complete digraph on 0..8 with source 1 and destination 7.
    fn complete8() -> GradedSubgraph {
        let mut t = generate_topology(8, 1, 1.0, 0).unwrap();
        t.source = NodeId(1);
        t.destination = NodeId(7);
        GradedSubgraph::full(&t)
    }

    #[test]
    fn worked_single_point_example() {
        let (o1, o2) = single_point_crossover(&P1, &P2, 4).unwrap();
        assert_eq!(o1, vec![1, 2, 3, 4, 2, 5, 7]);
        assert_eq!(o2, vec![1, 3, 4, 6, 5, 6, 7]);
    }

    #[test]
    fn single_point_boundaries() {
        let (o1, _) = single_point_crossover(&P1, &P2, 1).unwrap();
        assert_eq!(o1, [&P1[..1], &P2[1..]].concat());
        let (o1, o2) = single_point_crossover(&P1, &P1, 3).unwrap();
        assert_eq!((o1.as_slice(), o2.as_slice()), (&P1[..], &P1[..]));
        assert!(matches!(single_point_crossover(&P1, &P2, 0), Err(GaError::BadCutPoint { .. })));
        assert!(matches!(single_point_crossover(&P1, &P2, 7), Err(GaError::BadCutPoint { .. })));
    }

    #[test]
    fn hand_executed_pmx() {
        let (o1, o2) = pmx_crossover(&P1, &P2, (3, 5)).unwrap();
        assert_eq!(o1, vec![1, 5, 3, 6, 2, 4, 7]);
        assert_eq!(o2, vec![1, 3, 6, 4, 5, 2, 7]);
    }

    #[test]
    fn pmx_rejects_bad_input() {
        assert_eq!(pmx_crossover(&P1, &[1, 1, 3, 4, 5, 6, 7], (3, 5)), Err(GaError::NotPermutation));
        assert_eq!(pmx_crossover(&P1, &[1, 2, 3], (1, 2)), Err(GaError::NotPermutation));
        assert!(matches!(pmx_crossover(&P1, &P2, (5, 3)), Err(GaError::BadCutPoints { .. })));
        assert!(matches!(pmx_crossover(&P1, &P2, (0, 3)), Err(GaError::BadCutPoints { .. })));
        assert!(matches!(pmx_crossover(&P1, &P2, (3, 8)), Err(GaError::BadCutPoints { .. })));
    }

    #[test]
    fn common_node_cut_prefers_point_near_four() {
        // shared interior nodes 3, 4 and 6; node 4 sits at index 3 in p1 and 2 in p2
        let (o1, o2) = common_node_crossover(&P1, &P2, 4).unwrap();
        assert_eq!(o1, vec![1, 2, 3, 4, 6, 2, 5, 7]);
        assert_eq!(o2, vec![1, 3, 4, 5, 6, 7]);
        assert!(common_node_crossover(&[1, 2, 7], &[1, 3, 7], 4).is_none());
        // same index in both parents: identical to the positional operator
        let a = [0, 5, 9, 2, 8];
        let b = [0, 6, 9, 3, 8];
        assert_eq!(common_node_crossover(&a, &b, 4), single_point_crossover(&a, &b, 3).ok());
    }

    #[test]
    fn insertion_examples() {
        let g = complete8();
        let c = Chromosome::new(ids(&[1, 4, 7]), &g).unwrap();
        let m = insertion_mutation(&c, NodeId(5), 2, &g).unwrap();
        assert_eq!(m.path(), ids(&[1, 4, 5, 7]).as_slice());
        assert_eq!(insertion_mutation(&c, NodeId(4), 1, &g), Err(GaError::DuplicateNode(NodeId(4))));
        assert!(matches!(insertion_mutation(&c, NodeId(5), 0, &g), Err(GaError::MutationRejected(_))));
        assert!(matches!(insertion_mutation(&c, NodeId(5), 3, &g), Err(GaError::MutationRejected(_))));
    }

    #[test]
    fn insertion_needs_edges() {
        let mut t = generate_topology(8, 1, 1.0, 0).unwrap();
        t.source = NodeId(1);
        t.destination = NodeId(7);
        t.edges.retain(|e| !(e.from == NodeId(5) && e.to == NodeId(7)));
        let g = GradedSubgraph::full(&t);
        let c = Chromosome::new(ids(&[1, 4, 7]), &g).unwrap();
        assert!(matches!(insertion_mutation(&c, NodeId(5), 2, &g), Err(GaError::MutationRejected(_))));
    }

    #[test]
    fn repair_examples() {
        let g = complete8();
        let fixed = repair(&ids(&[1, 2, 3, 4, 2, 5, 7]), &g).ok().unwrap();
        assert_eq!(fixed.path(), ids(&[1, 2, 5, 7]).as_slice());
        let valid = ids(&[1, 3, 6, 7]);
        assert_eq!(repair(&valid, &g).ok().unwrap().path(), valid.as_slice());

        let mut t = generate_topology(8, 1, 1.0, 0).unwrap();
        t.source = NodeId(1);
        t.destination = NodeId(7);
        t.edges.retain(|e| !(e.from == NodeId(3) && e.to == NodeId(6)));
        assert_eq!(repair(&valid, &GradedSubgraph::full(&t)), Repair::Rejected);
        assert_eq!(repair(&ids(&[2, 3, 7]), &g), Repair::Rejected);
        assert_eq!(repair(&ids(&[1, 3, 6]), &g), Repair::Rejected);
    }

    fn arb_perm_pair() -> impl Strategy<Value = (Vec<u32>, Vec<u32>, usize, usize)> {
        (5usize..=12)
            .prop_flat_map(|n| {
                let base: Vec<u32> = (0..n as u32).collect();
                (
                    Just(base.clone()).prop_shuffle(),
                    Just(base).prop_shuffle(),
                    1..n,
                    1..=n,
                )
            })
            .prop_filter("a < b", |(_, _, a, b)| a < b)
    }

    proptest! {
        #[test]
        fn pmx_preserves_gene_sets((p1, p2, a, b) in arb_perm_pair()) {
            let (o1, o2) = pmx_crossover(&p1, &p2, (a, b)).unwrap();
            let mut sorted = p1.clone();
            sorted.sort_unstable();
            for o in [o1, o2] {
                let mut s = o.clone();
                s.sort_unstable();
                prop_assert_eq!(&s, &sorted);
            }
            let (s1, s2) = pmx_crossover(&p1, &p1, (a, b)).unwrap();
            prop_assert_eq!(&s1, &p1);
            prop_assert_eq!(&s2, &p1);
        }

        #[test]
        fn single_point_conserves_combined_multiset(
            p1 in prop::collection::vec(0u32..20, 2..12),
            p2 in prop::collection::vec(0u32..20, 2..12),
            point in 1usize..11,
        ) {
            prop_assume!(point < p1.len().min(p2.len()));
            let (o1, o2) = single_point_crossover(&p1, &p2, point).unwrap();
            let mut before = [p1.clone(), p2.clone()].concat();
            let mut after = [o1, o2].concat();
            before.sort_unstable();
            after.sort_unstable();
            prop_assert_eq!(before, after);
        }

        #[test]
        fn repair_is_idempotent_and_never_grows(raw in prop::collection::vec(0u32..8, 2..14)) {
            let g = complete8();
            let mut raw = ids(&raw);
            raw[0] = NodeId(1);
            *raw.last_mut().unwrap() = NodeId(7);
            if let Repair::Valid(c) = repair(&raw, &g) {
                prop_assert!(c.len() <= raw.len());
                prop_assert_eq!(repair(c.path(), &g), Repair::Valid(c.clone()));
            }
        }
    }
}
