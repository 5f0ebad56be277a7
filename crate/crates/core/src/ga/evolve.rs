use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    common_node_crossover, insertion_mutation, pmx_crossover, repair,
    Chromosome, FitnessReport, GaError, Population, Wheel,
};
use crate::grading::GradedSubgraph;
use crate::topology::{NodeId, Topology};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaConfig {
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    /// Breeding rounds after the initial population.
    pub generations: usize,
    /// Population size is the number of enumerated paths, capped here.
    pub population_cap: usize,
    /// Members whose report fitness exceeds this carry over unchanged.
    pub elite_threshold: f64,
    pub crossover_point: usize,
    pub pmx_points: (usize, usize),
    /// Bandwidth a path must sustain end to end.
    pub demand: f64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            crossover_prob: 0.95,
            mutation_prob: 0.05,
            generations: 10,
            population_cap: 20,
            elite_threshold: 0.9,
            crossover_point: 4,
            pmx_points: (3, 5),
            demand: 25.0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), GaError> {
        let bad = |m: String| Err(GaError::InvalidConfig(m));
        for (name, p) in [("crossover_prob", self.crossover_prob), ("mutation_prob", self.mutation_prob)] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} {p} outside [0, 1]"));
            }
        }
        if self.generations < 1 {
            return bad("generations must be >= 1".into());
        }
        if self.population_cap < 1 {
            return bad("population_cap must be >= 1".into());
        }
        if !self.elite_threshold.is_finite() {
            return bad("elite_threshold must be finite".into());
        }
        if !(self.demand >= 0.0 && self.demand.is_finite()) {
            return bad(format!("demand {} must be finite and non-negative", self.demand));
        }
        let (a, b) = self.pmx_points;
        if !(1 <= a && a < b) {
            return bad(format!("pmx_points ({a}, {b}) must satisfy 1 <= a < b"));
        }
        Ok(())
    }
}

/// Route preference, smallest first.
///
/// Paths meeting the demand beat those that do not. Among feasible paths
/// fewer hops win, then the wider bottleneck. Among infeasible paths the
/// wider bottleneck wins, then fewer hops. Lexicographic node order breaks
/// any remaining tie.
pub fn compare_routes(
    (a, a_bottleneck): (&Chromosome, f64),
    (b, b_bottleneck): (&Chromosome, f64),
    demand: f64,
) -> Ordering {
    let a_ok = a_bottleneck >= demand;
    let b_ok = b_bottleneck >= demand;
    let hops = a.hops().cmp(&b.hops());
    let width = b_bottleneck.total_cmp(&a_bottleneck);
    let primary = match (a_ok, b_ok) {
        (true, true) => hops.then(width),
        (false, false) => width.then(hops),
        _ => b_ok.cmp(&a_ok),
    };
    primary.then_with(|| a.path().cmp(b.path()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    /// Widest bottleneck present in the population.
    pub max_bottleneck: f64,
    pub best_hops: usize,
    pub best_bottleneck: f64,
    /// Report fitness of the preferred route within its generation.
    pub best_report_fitness: f64,
    pub feasible_members: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evolution {
    pub best: Chromosome,
    pub best_bottleneck: f64,
    pub best_report_fitness: f64,
    pub history: Vec<GenerationStats>,
    pub final_population: Population,
}

fn best_index(pop: &[Chromosome], report: &FitnessReport, demand: f64) -> usize {
    (0..pop.len())
        .min_by(|&i, &j| {
            compare_routes(
                (&pop[i], report.bottlenecks[i]),
                (&pop[j], report.bottlenecks[j]),
                demand,
            )
        })
        .expect("population is never empty")
}

/// Run the generation loop.
///
/// Each round keeps the preferred route unchanged, carries forward every
/// member whose report fitness exceeds the elite threshold, and
/// fills the rest with roulette-selected offspring. Offspring that cannot be
/// repaired into a valid path are replaced by the fitter parent. The loop
/// stops after `config.generations` rounds, or earlier once every member
/// meets the demand.
pub fn evolve<R: Rng + ?Sized>(
    initial: Population,
    config: &GaConfig,
    topology: &Topology,
    subgraph: &GradedSubgraph,
    rng: &mut R,
) -> Result<Evolution, GaError> {
    config.validate()?;
    if initial.is_empty() {
        return Err(GaError::NoRoute);
    }
    let size = initial.len();
    let mut pop = initial.members;
    let mut history = Vec::with_capacity(config.generations + 1);

    for (round, generation) in (0..=config.generations).zip(initial.generation..) {
        let report =
            FitnessReport::from_bottlenecks(pop.iter().map(|c| c.bottleneck(topology)).collect())?;
        let best = best_index(&pop, &report, config.demand);
        let feasible = report.bottlenecks.iter().filter(|&&b| b >= config.demand).count();
        history.push(GenerationStats {
            generation,
            max_bottleneck: report.max_bottleneck(),
            best_hops: pop[best].hops(),
            best_bottleneck: report.bottlenecks[best],
            best_report_fitness: report.report_fitness[best],
            feasible_members: feasible,
        });
        if round == config.generations || feasible == pop.len() {
            return Ok(Evolution {
                best: pop[best].clone(),
                best_bottleneck: report.bottlenecks[best],
                best_report_fitness: report.report_fitness[best],
                history,
                final_population: Population { members: pop, generation },
            });
        }

        let mut next = Vec::with_capacity(size);
        next.push(pop[best].clone());
        let mut by_fitness: Vec<usize> = (0..pop.len()).collect();
        by_fitness.sort_by(|&i, &j| report.report_fitness[j].total_cmp(&report.report_fitness[i]));
        for i in by_fitness {
            if next.len() >= size || report.report_fitness[i] <= config.elite_threshold {
                break;
            }
            next.push(pop[i].clone());
        }
        let wheel = Wheel::new(&report.selection_weights);
        while next.len() < size {
            let a = wheel.spin(rng);
            let b = wheel.spin(rng);
            let fitter = if report.bottlenecks[b] > report.bottlenecks[a] { b } else { a };
            let (o1, o2) = if rng.gen_bool(config.crossover_prob) {
                mate(pop[a].path(), pop[b].path(), config)
            } else {
                (pop[a].path().to_vec(), pop[b].path().to_vec())
            };
            for raw in [o1, o2] {
                if next.len() >= size {
                    break;
                }
                let child = repair(&raw, subgraph).ok().unwrap_or_else(|| pop[fitter].clone());
                let child = if rng.gen_bool(config.mutation_prob) {
                    mutate(&child, subgraph, rng).unwrap_or(child)
                } else {
                    child
                };
                next.push(child);
            }
        }
        pop = next;
    }
    unreachable!("the final round always returns")
}

/// Pick the crossover operator for a mating pair.
///
/// Parents covering the same node set with equal length use PMX; parents
/// sharing an interior node use a single-point cut at a shared node;
/// anything else is cloned.
fn mate(p1: &[NodeId], p2: &[NodeId], config: &GaConfig) -> (Vec<NodeId>, Vec<NodeId>) {
    if p1 != p2 && p1.len() == p2.len() && p1.len() >= 3 {
        let len = p1.len();
        let b = config.pmx_points.1.min(len - 1);
        let a = config.pmx_points.0.min(b - 1).max(1);
        if a < b {
            if let Ok(children) = pmx_crossover(p1, p2, (a, b)) {
                return children;
            }
        }
    }
    common_node_crossover(p1, p2, config.crossover_point)
        .unwrap_or_else(|| (p1.to_vec(), p2.to_vec()))
}

fn mutate<R: Rng + ?Sized>(
    c: &Chromosome,
    subgraph: &GradedSubgraph,
    rng: &mut R,
) -> Option<Chromosome> {
    let candidates: Vec<NodeId> = subgraph
        .survivors()
        .iter()
        .copied()
        .filter(|&n| !c.contains(n))
        .collect();
    let &node = candidates.choose(rng)?;
    let position = rng.gen_range(1..c.len());
    insertion_mutation(c, node, position, subgraph).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ga::enumerate_paths;
    use crate::rng::seeded_rng;
    use crate::topology::{assign_attributes, generate_topology};

    fn setup(seed: u64) -> (Topology, GradedSubgraph) {
        let t = generate_topology(16, 2, 0.35, seed).unwrap();
        let t = assign_attributes(t, seed + 1, (10.0, 100.0), (0.0, 10.0)).unwrap();
        let g = GradedSubgraph::full(&t);
        (t, g)
    }

    #[test]
    fn preferred_route_survives_to_the_end() {
        let (t, g) = setup(3);
        let paths = enumerate_paths(&g, 12, 15).unwrap();
        let cfg = GaConfig { demand: 1e9, ..GaConfig::default() };
        let initial_best = paths
            .iter()
            .min_by(|a, b| compare_routes((a, a.bottleneck(&t)), (b, b.bottleneck(&t)), cfg.demand))
            .unwrap()
            .clone();
        let out = evolve(Population::new(paths), &cfg, &t, &g, &mut seeded_rng(1)).unwrap();
        assert_eq!(out.history.len(), cfg.generations + 1);
        assert!(
            compare_routes(
                (&out.best, out.best_bottleneck),
                (&initial_best, initial_best.bottleneck(&t)),
                cfg.demand
            ) != Ordering::Greater
        );
    }

    #[test]
    fn members_stay_valid_and_widest_bottleneck_never_drops() {
        for seed in 0..20 {
            let (t, g) = setup(seed);
            let paths = enumerate_paths(&g, 20, 15).unwrap();
            let cfg = GaConfig { demand: 1e9, mutation_prob: 0.5, ..GaConfig::default() };
            let out = evolve(Population::new(paths), &cfg, &t, &g, &mut seeded_rng(seed)).unwrap();
            for c in &out.final_population.members {
                Chromosome::new(c.path().to_vec(), &g).unwrap();
            }
            for w in out.history.windows(2) {
                assert!(w[1].max_bottleneck >= w[0].max_bottleneck);
                // nothing is feasible, so the preferred route is the widest one
                assert!(w[1].best_bottleneck >= w[0].best_bottleneck);
                assert_eq!(w[1].best_bottleneck, w[1].max_bottleneck);
            }
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let (t, g) = setup(9);
        let paths = enumerate_paths(&g, 20, 15).unwrap();
        let cfg = GaConfig::default();
        let a = evolve(Population::new(paths.clone()), &cfg, &t, &g, &mut seeded_rng(5)).unwrap();
        let b = evolve(Population::new(paths), &cfg, &t, &g, &mut seeded_rng(5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn stops_early_when_all_members_meet_demand() {
        let (t, g) = setup(4);
        let paths = enumerate_paths(&g, 10, 15).unwrap();
        let cfg = GaConfig { demand: 0.0, ..GaConfig::default() };
        let out = evolve(Population::new(paths), &cfg, &t, &g, &mut seeded_rng(0)).unwrap();
        assert_eq!(out.history.len(), 1);
    }

    #[test]
    fn empty_population_is_no_route() {
        let (t, g) = setup(4);
        let err = evolve(Population::new(vec![]), &GaConfig::default(), &t, &g, &mut seeded_rng(0));
        assert_eq!(err, Err(GaError::NoRoute));
    }

    #[test]
    fn route_ordering() {
        let a = Chromosome::from_valid(vec![NodeId(0), NodeId(1), NodeId(3)]);
        let b = Chromosome::from_valid(vec![NodeId(0), NodeId(2), NodeId(4), NodeId(3)]);
        // both feasible: fewer hops wins
        assert_eq!(compare_routes((&a, 50.0), (&b, 90.0), 40.0), Ordering::Less);
        // only the longer one is feasible
        assert_eq!(compare_routes((&a, 50.0), (&b, 90.0), 60.0), Ordering::Greater);
        // neither feasible: the wider bottleneck wins
        assert_eq!(compare_routes((&a, 50.0), (&b, 90.0), 95.0), Ordering::Greater);
        assert_eq!(compare_routes((&a, 90.0), (&b, 90.0), 95.0), Ordering::Less);
    }
}
