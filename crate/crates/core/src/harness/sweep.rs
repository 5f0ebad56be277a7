use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::run::{build_topology, run_once, Mode, Outcome, RunReport};
use crate::config::SimConfig;
use crate::error::Error;
use crate::rng::derive_seed;

/// One aggregate cell: a node count and a mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub node_count: usize,
    pub mode: Mode,
    pub runs: usize,
    pub succeeded: usize,
    pub failed: usize,
    pub mean_subgraph_nodes: Option<f64>,
    pub mean_nodes_selected: Option<f64>,
    pub mean_route_length: Option<f64>,
    pub mean_report_fitness: Option<f64>,
    pub oracle_evaluated: usize,
    pub oracle_matches: usize,
    pub hit_rate: Option<f64>,
    pub replay_congestion_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config_digest: String,
    pub base_seed: u64,
    pub aggregates: Vec<AggregateRow>,
    pub runs: Vec<RunReport>,
}

impl SweepReport {
    pub fn row(&self, node_count: usize, mode: Mode) -> Option<&AggregateRow> {
        self.aggregates.iter().find(|r| r.node_count == node_count && r.mode == mode)
    }
}

pub fn run_seed(base_seed: u64, node_count: usize, run: usize) -> u64 {
    derive_seed(base_seed, &[node_count as u64, run as u64])
}

/// Both modes on the same topologies for every node count and run index.
/// Runs execute in parallel; results are collected in a fixed order.
pub fn run_sweep(config: &SimConfig) -> Result<SweepReport, Error> {
    config.validate()?;
    let sweep = &config.sweep;
    let jobs: Vec<(usize, usize)> = sweep
        .node_counts
        .iter()
        .flat_map(|&n| (0..sweep.runs_per_count).map(move |r| (n, r)))
        .collect();

    let per_job: Vec<Vec<RunReport>> = jobs
        .par_iter()
        .map(|&(n, r)| {
            let seed = run_seed(sweep.base_seed, n, r);
            let topology = match build_topology(config, n, seed) {
                Ok(t) => t,
                Err(Error::Topology(crate::topology::TopologyError::GenerationFailed { .. })) => {
                    return Ok(Mode::BOTH
                        .iter()
                        .map(|&mode| generation_failure(mode, seed, r, n, config))
                        .collect());
                }
                Err(e) => return Err(e),
            };
            Mode::BOTH
                .iter()
                .map(|&mode| {
                    let mut report = run_once(&topology, mode, config, seed)?;
                    report.run_index = r;
                    Ok(report)
                })
                .collect::<Result<Vec<_>, Error>>()
        })
        .collect::<Result<_, Error>>()?;
    let runs: Vec<RunReport> = per_job.into_iter().flatten().collect();

    let aggregates = sweep
        .node_counts
        .iter()
        .flat_map(|&n| Mode::BOTH.map(|mode| aggregate(&runs, n, mode)))
        .collect();
    Ok(SweepReport { config_digest: config.digest(), base_seed: sweep.base_seed, aggregates, runs })
}

fn generation_failure(mode: Mode, seed: u64, run: usize, n: usize, config: &SimConfig) -> RunReport {
    let mut report = RunReport::failed(mode, Outcome::GenerationFailed, seed, config, n, 0);
    report.run_index = run;
    report
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

/// Fraction of oracle-evaluated runs that matched; `None` when none were evaluated.
pub fn hit_rate(matches: usize, evaluated: usize) -> Option<f64> {
    (evaluated > 0).then(|| matches as f64 / evaluated as f64)
}

fn aggregate(runs: &[RunReport], node_count: usize, mode: Mode) -> AggregateRow {
    let cell: Vec<&RunReport> = runs
        .iter()
        .filter(|r| r.total_nodes == node_count && r.mode == mode)
        .collect();
    let ok: Vec<&RunReport> = cell.iter().copied().filter(|r| r.succeeded()).collect();
    let evaluated = ok.iter().filter(|r| r.oracle.evaluated).count();
    let matches = ok.iter().filter(|r| r.oracle.matched == Some(true)).count();
    AggregateRow {
        node_count,
        mode,
        runs: cell.len(),
        succeeded: ok.len(),
        failed: cell.len() - ok.len(),
        mean_subgraph_nodes: mean(ok.iter().map(|r| r.subgraph_nodes as f64)),
        mean_nodes_selected: mean(ok.iter().map(|r| r.nodes_selected as f64)),
        mean_route_length: mean(ok.iter().filter_map(|r| r.route_length).map(|l| l as f64)),
        mean_report_fitness: mean(ok.iter().filter_map(|r| r.report_fitness)),
        oracle_evaluated: evaluated,
        oracle_matches: matches,
        hit_rate: hit_rate(matches, evaluated),
        replay_congestion_rate: mean(
            ok.iter().filter_map(|r| r.replay_congested).map(|c| if c { 1.0 } else { 0.0 }),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SweepConfig;

    fn small(node_counts: Vec<usize>, runs: usize) -> SimConfig {
        SimConfig {
            sweep: SweepConfig { node_counts, runs_per_count: runs, base_seed: 11 },
            ..SimConfig::default()
        }
    }

    #[test]
    fn one_row_per_mode() {
        let report = run_sweep(&small(vec![4], 1)).unwrap();
        assert_eq!(report.aggregates.len(), 2);
        assert_eq!(report.runs.len(), 2);
        assert!(report.row(4, Mode::Graded).is_some());
        assert!(report.row(4, Mode::Ungraded).is_some());
    }

    #[test]
    fn hit_rate_arithmetic() {
        assert_eq!(hit_rate(18, 20), Some(0.9));
        assert_eq!(hit_rate(0, 0), None);
    }

    #[test]
    fn sweep_is_deterministic() {
        let cfg = small(vec![8, 16], 3);
        let a = run_sweep(&cfg).unwrap();
        let b = run_sweep(&cfg).unwrap();
        assert_eq!(a, b);
        for row in &a.aggregates {
            assert_eq!(row.runs, 3);
            if let Some(h) = row.hit_rate {
                assert!((0.0..=1.0).contains(&h));
            }
        }
    }
}
