use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gradnet_core::harness::{
    build_topology, run_once, run_sweep, write_aggregate_csv, write_plot_csv, write_run_json,
    write_runs_csv, write_sweep_json, HarnessError, KnowledgeBase, KnowledgeBaseEntry, Outcome,
};
use gradnet_core::topology::TopologyError;
use gradnet_core::{Error, Mode, SimConfig, Topology};

const EXIT_USAGE: u8 = 2;
const EXIT_NO_ROUTE: u8 = 3;
const EXIT_IO: u8 = 4;
const EXIT_DISCONNECTED: u8 = 5;

#[derive(Parser)]
#[command(name = "gradnet", version, about = "Graded genetic routing simulator")]
struct Cli {
    /// JSON configuration file; omitted fields take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base seed. Drawn from entropy and printed when omitted.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a topology with node metrics and write it as JSON.
    GenTopology {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        regions: Option<usize>,
        /// Intra-region edge density in (0, 1].
        #[arg(long)]
        density: Option<f64>,
    },
    /// Route once on a saved or freshly generated topology.
    Run {
        /// Topology JSON from gen-topology.
        #[arg(long, conflicts_with = "nodes", required_unless_present = "nodes")]
        topology: Option<PathBuf>,
        /// Generate a topology of this size instead of loading one.
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long, default_value = "graded")]
        mode: Mode,
        /// Bandwidth the route must sustain.
        #[arg(long)]
        demand: Option<f64>,
        /// Knowledge base file to record the best path in.
        #[arg(long)]
        kb: Option<PathBuf>,
    },
    /// Sweep node counts in both modes and write aggregate statistics.
    Compare {
        /// Runs per node count.
        #[arg(long)]
        runs: Option<usize>,
        /// Comma-separated node counts.
        #[arg(long, value_delimiter = ',')]
        nodes: Option<Vec<usize>>,
        /// Plot data file; defaults to `<output stem>.plot.csv` next to the output.
        #[arg(long)]
        plot_output: Option<PathBuf>,
        /// Per-run CSV file.
        #[arg(long)]
        runs_output: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        Self { code: EXIT_IO, message: format!("{}: {err}", path.display()) }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::Topology(TopologyError::Io(_)) | Error::Harness(_) => EXIT_IO,
            _ => EXIT_USAGE,
        };
        Self { code, message: err.to_string() }
    }
}

impl From<HarnessError> for Failure {
    fn from(err: HarnessError) -> Self {
        Error::from(err).into()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn execute(cli: Cli) -> Result<u8, Failure> {
    let mut config = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::GenTopology { nodes, regions, density } => {
            if regions.is_some() {
                config.topology.regions = regions;
            }
            if density.is_some() {
                config.topology.edge_density = density;
            }
            config.validate()?;
            let seed = seed_or_entropy(cli.seed);
            let topology = build_topology(&config, nodes, seed)?;
            let mut text = topology.to_json().map_err(Error::from)?;
            text.push('\n');
            emit(cli.output.as_deref(), |w| w.write_all(text.as_bytes()).map_err(HarnessError::from))?;
            eprintln!("topology digest {}", topology.digest());
            Ok(0)
        }
        Command::Run { topology, nodes, mode, demand, kb } => {
            if let Some(d) = demand {
                config.ga.demand = d;
            }
            config.validate()?;
            let seed = seed_or_entropy(cli.seed);
            let topology = match (topology, nodes) {
                (Some(path), _) => Topology::load(&path).map_err(|e| match e {
                    TopologyError::Io(io) => Failure::io(&path, io),
                    other => Failure::usage(format!("{}: {other}", path.display())),
                })?,
                (None, Some(n)) => build_topology(&config, n, seed)?,
                (None, None) => return Err(Failure::usage("either --topology or --nodes is required")),
            };
            let report = run_once(&topology, mode, &config, seed)?;
            emit(cli.output.as_deref(), |w| match cli.format {
                Format::Json => write_run_json(&report, w),
                Format::Csv => write_runs_csv([&report], w),
            })?;
            if let (Some(kb_path), Some(path), Some(bottleneck)) =
                (kb, report.best_path.as_ref(), report.bottleneck)
            {
                let kb = KnowledgeBase::open(kb_path);
                let digest = topology.digest();
                if let Some(prev) = kb.lookup(&digest, topology.source, topology.destination)? {
                    eprintln!("knowledge base best bottleneck {}", prev.bottleneck);
                }
                kb.record(&KnowledgeBaseEntry::new(
                    digest,
                    topology.source,
                    topology.destination,
                    path.clone(),
                    bottleneck,
                ))?;
            }
            Ok(match report.outcome {
                Outcome::Success => 0,
                Outcome::Disconnected => EXIT_DISCONNECTED,
                Outcome::NoRoute | Outcome::GenerationFailed => EXIT_NO_ROUTE,
            })
        }
        Command::Compare { runs, nodes, plot_output, runs_output } => {
            if let Some(r) = runs {
                config.sweep.runs_per_count = r;
            }
            if let Some(n) = nodes {
                config.sweep.node_counts = n;
            }
            if let Some(s) = cli.seed {
                config.sweep.base_seed = s;
            }
            let report = run_sweep(&config)?;
            emit(cli.output.as_deref(), |w| match cli.format {
                Format::Json => write_sweep_json(&report, w),
                Format::Csv => write_aggregate_csv(&report, w),
            })?;
            let plot_path = plot_output.or_else(|| cli.output.as_deref().map(plot_path_for));
            if let Some(path) = plot_path {
                emit(Some(&path), |w| write_plot_csv(&report, w))?;
            }
            if let Some(path) = runs_output {
                emit(Some(&path), |w| write_runs_csv(&report.runs, w))?;
            }
            eprintln!("config digest {}", report.config_digest);
            Ok(0)
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<SimConfig, Failure> {
    let Some(path) = path else {
        return Ok(SimConfig::default());
    };
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn seed_or_entropy(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random();
        eprintln!("seed {s}");
        s
    })
}

fn plot_path_for(output: &Path) -> PathBuf {
    let stem = output.file_stem().and_then(|s| s.to_str()).unwrap_or("compare");
    output.with_file_name(format!("{stem}.plot.csv"))
}

fn emit(
    path: Option<&Path>,
    write: impl FnOnce(&mut dyn Write) -> Result<(), HarnessError>,
) -> Result<(), Failure> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| Failure::io(p, e))?;
            let mut out = BufWriter::new(file);
            write(&mut out)?;
            out.flush().map_err(|e| Failure::io(p, e))
        }
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            write(&mut out)?;
            out.flush().map_err(|e| Failure::io(Path::new("<stdout>"), e))
        }
    }
}
