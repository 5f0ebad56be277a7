//! CSV and JSON emission for run and sweep reports.
//!
//! Column sets are fixed; the `*_COLUMNS` constants list them in order.

use std::io::Write;

use serde::Serialize;

use super::run::RunReport;
use super::sweep::SweepReport;
use super::HarnessError;
use crate::harness::Mode;

pub const RUN_COLUMNS: &[&str] = &[
    "node_count",
    "run",
    "mode",
    "seed",
    "outcome",
    "subgraph_nodes",
    "nodes_selected",
    "route_length",
    "bottleneck",
    "feasible",
    "report_fitness",
    "generations",
    "oracle_evaluated",
    "oracle_route_length",
    "oracle_match",
    "replay_congested",
    "path",
    "config_digest",
];

pub const AGGREGATE_COLUMNS: &[&str] = &[
    "node_count",
    "mode",
    "runs",
    "succeeded",
    "failed",
    "mean_subgraph_nodes",
    "mean_nodes_selected",
    "mean_route_length",
    "mean_report_fitness",
    "oracle_evaluated",
    "oracle_matches",
    "hit_rate",
    "replay_congestion_rate",
    "base_seed",
    "config_digest",
];

pub const PLOT_COLUMNS: &[&str] = &["node_count", "graded_nodes_selected", "ungraded_nodes_selected"];

#[derive(Serialize)]
struct RunRow<'a> {
    node_count: usize,
    run: usize,
    mode: Mode,
    seed: u64,
    outcome: &'static str,
    subgraph_nodes: usize,
    nodes_selected: usize,
    route_length: Option<usize>,
    bottleneck: Option<f64>,
    feasible: Option<bool>,
    report_fitness: Option<f64>,
    generations: usize,
    oracle_evaluated: bool,
    oracle_route_length: Option<usize>,
    oracle_match: Option<bool>,
    replay_congested: Option<bool>,
    path: String,
    config_digest: &'a str,
}

impl<'a> From<&'a RunReport> for RunRow<'a> {
    fn from(r: &'a RunReport) -> Self {
        RunRow {
            node_count: r.total_nodes,
            run: r.run_index,
            mode: r.mode,
            seed: r.seed,
            outcome: r.outcome.as_str(),
            subgraph_nodes: r.subgraph_nodes,
            nodes_selected: r.nodes_selected,
            route_length: r.route_length,
            bottleneck: r.bottleneck,
            feasible: r.feasible,
            report_fitness: r.report_fitness,
            generations: r.history.len(),
            oracle_evaluated: r.oracle.evaluated,
            oracle_route_length: r.oracle.route_length,
            oracle_match: r.oracle.matched,
            replay_congested: r.replay_congested,
            path: r
                .best_path
                .as_ref()
                .map(|p| p.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" "))
                .unwrap_or_default(),
            config_digest: &r.config_digest,
        }
    }
}

pub fn write_runs_csv<'a, W: Write>(
    runs: impl IntoIterator<Item = &'a RunReport>,
    out: W,
) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    for r in runs {
        w.serialize(RunRow::from(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_aggregate_csv<W: Write>(report: &SweepReport, out: W) -> Result<(), HarnessError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(AGGREGATE_COLUMNS)?;
    for row in &report.aggregates {
        w.write_record([
            row.node_count.to_string(),
            row.mode.to_string(),
            row.runs.to_string(),
            row.succeeded.to_string(),
            row.failed.to_string(),
            opt(row.mean_subgraph_nodes),
            opt(row.mean_nodes_selected),
            opt(row.mean_route_length),
            opt(row.mean_report_fitness),
            row.oracle_evaluated.to_string(),
            row.oracle_matches.to_string(),
            opt(row.hit_rate),
            opt(row.replay_congestion_rate),
            report.base_seed.to_string(),
            report.config_digest.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Node count against mean nodes selected, one column per mode.
pub fn write_plot_csv<W: Write>(report: &SweepReport, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(PLOT_COLUMNS)?;
    let mut counts: Vec<usize> = report.aggregates.iter().map(|r| r.node_count).collect();
    counts.dedup();
    for n in counts {
        let cell = |mode| opt(report.row(n, mode).and_then(|r| r.mean_nodes_selected));
        w.write_record([n.to_string(), cell(Mode::Graded), cell(Mode::Ungraded)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_run_json<W: Write>(report: &RunReport, mut out: W) -> Result<(), HarnessError> {
    serde_json::to_writer_pretty(&mut out, report)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn write_sweep_json<W: Write>(report: &SweepReport, mut out: W) -> Result<(), HarnessError> {
    serde_json::to_writer_pretty(&mut out, report)?;
    out.write_all(b"\n")?;
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}
