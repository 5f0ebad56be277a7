use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::oracle::{oracle_best_path, RouteScore};
use crate::config::SimConfig;
use crate::error::Error;
use crate::ga::{enumerate_paths, evolve, GaError, GenerationStats, Population};
use crate::grading::{level1_select, GradedSubgraph, GradingError};
use crate::rng::{derive_seed, seeded_rng};
use crate::topology::{assign_attributes_with, generate_with, NodeId, Topology};

const ATTRIBUTE_STREAM: u64 = 1;
const REPLAY_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Graded,
    Ungraded,
}

impl Mode {
    pub const BOTH: [Mode; 2] = [Mode::Graded, Mode::Ungraded];
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Graded => "graded",
            Mode::Ungraded => "ungraded",
        })
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "graded" => Ok(Mode::Graded),
            "ungraded" => Ok(Mode::Ungraded),
            other => Err(format!("unknown mode `{other}`, expected graded or ungraded")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Success,
    /// Level-1 left no source to destination path.
    Disconnected,
    NoRoute,
    GenerationFailed,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Success => "success",
            Outcome::Disconnected => "disconnected",
            Outcome::NoRoute => "no_route",
            Outcome::GenerationFailed => "generation_failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    /// False when the topology exceeds the oracle node cap or the run failed.
    pub evaluated: bool,
    pub route_length: Option<usize>,
    pub bottleneck: Option<f64>,
    pub matched: Option<bool>,
}

impl OracleComparison {
    fn skipped() -> Self {
        Self { evaluated: false, route_length: None, bottleneck: None, matched: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub mode: Mode,
    pub outcome: Outcome,
    pub seed: u64,
    pub run_index: usize,
    pub config_digest: String,
    pub total_nodes: usize,
    /// Nodes left after Level-1 (all nodes when ungraded).
    pub subgraph_nodes: usize,
    /// Distinct nodes appearing in the final population.
    pub nodes_selected: usize,
    pub best_path: Option<Vec<NodeId>>,
    pub route_length: Option<usize>,
    pub bottleneck: Option<f64>,
    pub feasible: Option<bool>,
    pub report_fitness: Option<f64>,
    pub oracle: OracleComparison,
    /// Whether re-drawn traffic on the chosen path leaves less than the demand free.
    pub replay_congested: Option<bool>,
    pub history: Vec<GenerationStats>,
}

impl RunReport {
    pub(crate) fn failed(mode: Mode, outcome: Outcome, seed: u64, config: &SimConfig, total: usize, sub: usize) -> Self {
        Self {
            mode,
            outcome,
            seed,
            run_index: 0,
            config_digest: config.digest(),
            total_nodes: total,
            subgraph_nodes: sub,
            nodes_selected: 0,
            best_path: None,
            route_length: None,
            bottleneck: None,
            feasible: None,
            report_fitness: None,
            oracle: OracleComparison::skipped(),
            replay_congested: None,
            history: Vec::new(),
        }
    }

    pub fn succeeded(&self) -> bool {
        self.outcome == Outcome::Success
    }
}

/// Generate a topology of `node_count` nodes and populate its metrics.
pub fn build_topology(config: &SimConfig, node_count: usize, seed: u64) -> Result<Topology, Error> {
    let spec = config.topology.spec_for(node_count, &config.attributes);
    let topo = generate_with(&spec, seed)?;
    Ok(assign_attributes_with(topo, derive_seed(seed, &[ATTRIBUTE_STREAM]), &config.attributes)?)
}

/// One routing run: optional Level-1 filtering, path enumeration, GA,
/// oracle comparison and a traffic replay on the chosen path.
///
/// Disconnection and missing routes are recorded in the report; only an
/// invalid configuration is an error.
pub fn run_once(
    topology: &Topology,
    mode: Mode,
    config: &SimConfig,
    seed: u64,
) -> Result<RunReport, Error> {
    config.validate()?;
    let total = topology.node_count();
    let subgraph = match mode {
        Mode::Ungraded => GradedSubgraph::full(topology),
        Mode::Graded => match level1_select(topology, &config.grading) {
            Ok(sub) => sub,
            Err(GradingError::Disconnected { .. }) => {
                return Ok(RunReport::failed(mode, Outcome::Disconnected, seed, config, total, 0));
            }
            Err(e) => return Err(e.into()),
        },
    };
    let sub_nodes = subgraph.node_count();
    let ga = &config.ga;
    let max_hops = config.harness.max_hops.unwrap_or(usize::MAX);

    let paths = match enumerate_paths(&subgraph, ga.population_cap, max_hops) {
        Ok(p) => p,
        Err(GaError::NoRoute) => {
            return Ok(RunReport::failed(mode, Outcome::NoRoute, seed, config, total, sub_nodes));
        }
        Err(e) => return Err(e.into()),
    };
    let mut rng = seeded_rng(seed);
    let evolution = evolve(Population::new(paths), ga, topology, &subgraph, &mut rng)?;
    let best = &evolution.best;
    let score = RouteScore::of(best.path(), topology, ga.demand);

    let oracle = if total <= config.harness.oracle_node_cap {
        let reference = oracle_best_path(&subgraph, topology, ga.demand)?;
        let reference_score = RouteScore::of(reference.path(), topology, ga.demand);
        OracleComparison {
            evaluated: true,
            route_length: Some(reference_score.hops),
            bottleneck: Some(reference_score.bottleneck),
            matched: Some(reference_score == score),
        }
    } else {
        OracleComparison::skipped()
    };

    let mut replay = seeded_rng(derive_seed(seed, &[REPLAY_STREAM]));
    let replay_congested = best.path().iter().any(|&n| {
        let bandwidth = topology.bandwidth(n);
        let load = replay.gen::<f64>() * bandwidth;
        bandwidth - load < ga.demand
    });

    Ok(RunReport {
        mode,
        outcome: Outcome::Success,
        seed,
        run_index: 0,
        config_digest: config.digest(),
        total_nodes: total,
        subgraph_nodes: sub_nodes,
        nodes_selected: evolution.final_population.distinct_nodes(),
        best_path: Some(best.path().to_vec()),
        route_length: Some(best.hops()),
        bottleneck: Some(score.bottleneck),
        feasible: Some(score.feasible),
        report_fitness: Some(evolution.best_report_fitness),
        oracle,
        replay_congested: Some(replay_congested),
        history: evolution.history,
    })
}
