//! `wavecount` — experiment runner for the single-particle modal processor
//! and its classical-wave twin.
//!
//! ```text
//! wavecount run grover --n-modes 16 --marked 3
//! wavecount run readout-demo --n-modes 8 --basis-index 5
//! wavecount run equivalence-check --n-modes 8 --trials 100
//! wavecount run resource-report --n-modes 1024 --output-format json
//! wavecount run --config experiment.json
//! ```
//!
//! Flags override values from `--config`; all heavy lifting lives in the
//! `wavecount` library crate.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wavecount::cli::{self, CliError, Experiment, OutputFormat, PartialConfig};

#[derive(Parser)]
#[command(
    name = "wavecount",
    version,
    about = "Single-particle modal processor with particle-counting readout and its classical-wave twin"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment pipeline (encoder -> processor -> decoder)
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    #[command(subcommand)]
    experiment: Option<ExperimentCommand>,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Default)]
struct CommonArgs {
    /// JSON config file; explicit flags override its values
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Register size N (number of modes)
    #[arg(long, value_name = "N")]
    n_modes: Option<usize>,

    /// Readout repetitions (default 10000)
    #[arg(long, value_name = "R")]
    n_shots: Option<u64>,

    /// Seed for all randomness (default 0)
    #[arg(long)]
    seed: Option<u64>,

    /// Report format
    #[arg(long, value_enum, value_name = "FORMAT")]
    output_format: Option<FormatArg>,

    /// Write the report to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    output_path: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Table => OutputFormat::Table,
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Search for a marked mode and read the register out
    Grover {
        /// Index of the marked mode
        #[arg(long, alias = "marked-index", value_name = "INDEX")]
        marked: Option<usize>,

        /// Oracle+diffusion rounds; default round(pi/4 * sqrt(N))
        #[arg(long, alias = "n-iterations", value_name = "K")]
        iterations: Option<u64>,

        #[command(flatten)]
        common: CommonArgs,
    },
    /// Prepare a state and demonstrate the binary detector readout
    ReadoutDemo {
        /// Prepare the basis state with this index
        #[arg(long, value_name = "INDEX")]
        basis_index: Option<usize>,

        /// Inline JSON amplitude vector, e.g. "[1, 0, [0, 1]]"
        #[arg(long, value_name = "JSON")]
        amplitudes: Option<String>,

        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compare quantum and classical correlations over random runs
    EquivalenceCheck {
        /// Number of random (state, unitary) pairs (default 100)
        #[arg(long, alias = "n-iterations", value_name = "T")]
        trials: Option<u64>,

        #[command(flatten)]
        common: CommonArgs,
    },
    /// Emit the resource ledger and classical-search comparison
    ResourceReport {
        /// Index of the marked mode (default 0)
        #[arg(long, alias = "marked-index", value_name = "INDEX")]
        marked: Option<usize>,

        /// Oracle+diffusion rounds; default round(pi/4 * sqrt(N))
        #[arg(long, alias = "n-iterations", value_name = "K")]
        iterations: Option<u64>,

        #[command(flatten)]
        common: CommonArgs,
    },
}

impl CommonArgs {
    /// Flags given on the experiment subcommand win over flags given on
    /// `run` itself.
    fn merged_over(self, outer: CommonArgs) -> CommonArgs {
        CommonArgs {
            config: self.config.or(outer.config),
            n_modes: self.n_modes.or(outer.n_modes),
            n_shots: self.n_shots.or(outer.n_shots),
            seed: self.seed.or(outer.seed),
            output_format: self.output_format.or(outer.output_format),
            output_path: self.output_path.or(outer.output_path),
        }
    }
}

fn main() -> ExitCode {
    let Cli {
        command: Command::Run(args),
    } = Cli::parse();
    match execute(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn execute(args: RunArgs) -> Result<(), CliError> {
    let mut flags = PartialConfig::default();
    let common = match args.experiment {
        None => args.common,
        Some(ExperimentCommand::Grover {
            marked,
            iterations,
            common,
        }) => {
            flags.experiment = Some(Experiment::Grover);
            flags.marked_index = marked;
            flags.n_iterations = iterations;
            common.merged_over(args.common)
        }
        Some(ExperimentCommand::ReadoutDemo {
            basis_index,
            amplitudes,
            common,
        }) => {
            flags.experiment = Some(Experiment::ReadoutDemo);
            flags.basis_index = basis_index;
            flags.amplitudes = amplitudes
                .as_deref()
                .map(cli::parse_amplitudes)
                .transpose()?;
            common.merged_over(args.common)
        }
        Some(ExperimentCommand::EquivalenceCheck { trials, common }) => {
            flags.experiment = Some(Experiment::EquivalenceCheck);
            flags.n_iterations = trials;
            common.merged_over(args.common)
        }
        Some(ExperimentCommand::ResourceReport {
            marked,
            iterations,
            common,
        }) => {
            flags.experiment = Some(Experiment::ResourceReport);
            flags.marked_index = marked;
            flags.n_iterations = iterations;
            common.merged_over(args.common)
        }
    };

    flags.n_modes = common.n_modes;
    flags.n_shots = common.n_shots;
    flags.seed = common.seed;
    flags.output_format = common.output_format.map(OutputFormat::from);
    flags.output_path = common.output_path;

    let config = cli::parse_config(common.config.as_deref(), flags)?;
    cli::run_experiment(&config)
}
