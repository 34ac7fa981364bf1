use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use clusterq::clusterlab::ClusterGraph;
use clusterq_bench::{run_experiment, BenchError, Experiment, ExperimentSpec, Grid};

#[derive(Parser)]
#[command(name = "clusterq", version, about = "Noisy cluster-state experiments as CSV tables")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Master seed for Monte Carlo experiments.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Monte Carlo samples per grid point.
    #[arg(long, global = true, default_value_t = 2000)]
    samples: usize,
    /// Output file (default: standard output).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Omit the `#` metadata header.
    #[arg(long, global = true)]
    no_meta: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Phase-averaged chain fidelity against flat-noise width λ.
    FigNoise {
        /// λ grid.
        #[arg(long, default_value = "0:6.283185307179586:64")]
        grid: Grid,
        #[arg(long, default_value_t = 3)]
        nmin: usize,
        #[arg(long, default_value_t = 10)]
        nmax: usize,
    },
    /// Dephasing fidelity of W, GHZ, linear and square cluster states.
    FigDephasing {
        /// Γ value or grid.
        #[arg(long, alias = "grid", default_value = "0.062")]
        gamma: Grid,
        #[arg(long, default_value_t = 3)]
        nmin: usize,
        #[arg(long, default_value_t = 25)]
        nmax: usize,
    },
    /// Mean CNOT fidelity for the 4-, 15- and 16-qubit layouts.
    FigCnot {
        /// σ grid of the Gaussian phase noise.
        #[arg(long, default_value = "0.1:1.0:9")]
        grid: Grid,
        /// First amplitude a = c of both logical inputs.
        #[arg(long, default_value_t = 0.5)]
        amplitude: f64,
    },
    /// Pair concurrence of Gaussian-averaged chains.
    ConcurrenceScan {
        /// σ grid.
        #[arg(long, default_value = "0.5")]
        grid: Grid,
        #[arg(long, default_value_t = 3)]
        nmin: usize,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
    },
    /// Transfer fidelity of |+⟩ along noisy wires.
    WireScan {
        /// σ grid.
        #[arg(long, default_value = "0.5")]
        grid: Grid,
        /// Wire lengths in qubits.
        #[arg(long, value_delimiter = ',', default_value = "2,4,6,8,10")]
        lengths: Vec<usize>,
    },
    /// Correlation-operator eigenvalues of the ideal state of a graph file.
    StabilizerCheck {
        #[arg(long)]
        graph: PathBuf,
    },
}

fn experiment(cmd: Command, common: &Common) -> Result<Experiment, BenchError> {
    Ok(match cmd {
        Command::FigNoise { grid, nmin, nmax } => Experiment::FigNoise { n_min: nmin, n_max: nmax, lambdas: grid },
        Command::FigDephasing { gamma, nmin, nmax } => {
            Experiment::FigDephasing { n_min: nmin, n_max: nmax, gammas: gamma }
        }
        Command::FigCnot { grid, amplitude } => {
            Experiment::FigCnot { sigmas: grid, samples: common.samples, seed: common.seed, amplitude }
        }
        Command::ConcurrenceScan { grid, nmin, nmax } => {
            Experiment::ConcurrenceScan { n_min: nmin, n_max: nmax, sigmas: grid }
        }
        Command::WireScan { grid, lengths } => {
            Experiment::WireScan { lengths, sigmas: grid, samples: common.samples, seed: common.seed }
        }
        Command::StabilizerCheck { graph } => {
            let text = fs::read_to_string(&graph).map_err(|source| BenchError::Io { path: graph.clone(), source })?;
            Experiment::StabilizerCheck { graph: ClusterGraph::from_text(&text)? }
        }
    })
}

fn run(cli: Cli) -> Result<(), BenchError> {
    let spec = ExperimentSpec { experiment: experiment(cli.command, &cli.common)?, output_path: cli.common.out };
    let table = run_experiment(&spec)?;
    let csv = table.to_csv(!cli.common.no_meta);
    match &spec.output_path {
        Some(path) => fs::write(path, csv).map_err(|source| BenchError::Io { path: path.clone(), source }),
        None => io::stdout()
            .lock()
            .write_all(csv.as_bytes())
            .map_err(|source| BenchError::Io { path: "<stdout>".into(), source }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
