//! Graded versus ungraded comparison runs, the exhaustive oracle, report
//! emission and the knowledge base of best paths.

mod kb;
mod oracle;
mod report;
mod run;
mod sweep;

use thiserror::Error;

pub use self::kb::{KnowledgeBase, KnowledgeBaseEntry};
pub use self::oracle::{oracle_best_path, RouteScore};
pub use self::report::{
    write_aggregate_csv, write_plot_csv, write_run_json, write_runs_csv, write_sweep_json,
    AGGREGATE_COLUMNS, PLOT_COLUMNS, RUN_COLUMNS,
};
pub use self::run::{build_topology, run_once, Mode, OracleComparison, Outcome, RunReport};
pub use self::sweep::{hit_rate, run_seed, run_sweep, AggregateRow, SweepReport};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("storage error at {path}: {source}")]
    Storage {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}
