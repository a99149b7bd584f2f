//! Experiment runner: the encoder -> processor -> decoder pipeline driven by
//! a JSON config file, command-line flags, or both (flags win).
//!
//! Four experiments are available:
//!
//! - `grover` — run the search, read the register out, audit the resources.
//! - `readout_demo` — prepare a state (basis index or explicit amplitudes),
//!   take a single joint readout shot plus a histogram of repeats.
//! - `equivalence_check` — compare quantum and classical correlation
//!   matrices over seeded random (state, unitary) pairs.
//! - `resource_report` — emit the ledger and classical-search comparison
//!   without running the processor.
//!
//! All randomness flows from the single `seed` field; identical configs
//! produce byte-identical output artifacts. ANSI styling is applied only to
//! table output on an interactive stdout and is disabled by `NO_COLOR`.

use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classical_twin::{equivalence_check, TwinError};
use crate::decoder::{self, DecoderError, Histogram};
use crate::processor::{self, GroverPlan, ProcessorError};
use crate::register::{random_state, ModeBasis, RegisterError, SingleParticleState};
use crate::resources::{audit_grover, compare_with_classical, ComparisonReport, ResourceLedger};

/// Readout repetitions when the config does not say otherwise.
pub const DEFAULT_N_SHOTS: u64 = 10_000;
/// Seed when the config does not say otherwise.
pub const DEFAULT_SEED: u64 = 0;
/// Random (state, unitary) pairs per `equivalence_check` run.
pub const DEFAULT_EQUIVALENCE_TRIALS: u64 = 100;
/// Largest correlation gap the `equivalence_check` experiment accepts.
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: field `{field}`: {message}")]
    Validation {
        field: &'static str,
        message: String,
    },
    #[error(
        "equivalence check failed: max |dC| = {max_abs_difference:.3e} exceeds {tolerance:.0e}"
    )]
    EquivalenceExceeded {
        max_abs_difference: f64,
        tolerance: f64,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Register(#[from] RegisterError),
    #[error(transparent)]
    Processor(#[from] ProcessorError),
    #[error(transparent)]
    Decoder(#[from] DecoderError),
    #[error(transparent)]
    Twin(#[from] TwinError),
}

fn invalid(field: &'static str, message: impl Into<String>) -> CliError {
    CliError::Validation {
        field,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Grover,
    ReadoutDemo,
    EquivalenceCheck,
    ResourceReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
    Json,
}

/// One amplitude in an inline JSON vector: a bare real or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum AmplitudeLiteral {
    Real(f64),
    Pair([f64; 2]),
}

impl From<AmplitudeLiteral> for Complex64 {
    fn from(a: AmplitudeLiteral) -> Self {
        match a {
            AmplitudeLiteral::Real(re) => Complex64::new(re, 0.0),
            AmplitudeLiteral::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

/// Parses an inline JSON amplitude vector such as `[1, 0, [0, 1]]`.
pub fn parse_amplitudes(text: &str) -> Result<Vec<AmplitudeLiteral>, CliError> {
    Ok(serde_json::from_str(text)?)
}

/// The raw, possibly incomplete configuration: what one source (a JSON file
/// or a set of flags) provides. Field names here are the canonical config
/// file schema.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub experiment: Option<Experiment>,
    pub n_modes: Option<usize>,
    pub marked_index: Option<usize>,
    pub n_iterations: Option<u64>,
    pub n_shots: Option<u64>,
    pub seed: Option<u64>,
    pub output_format: Option<OutputFormat>,
    pub output_path: Option<PathBuf>,
    pub basis_index: Option<usize>,
    pub amplitudes: Option<Vec<AmplitudeLiteral>>,
}

impl PartialConfig {
    pub fn from_json_str(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Fills every unset field from `fallback`; set fields win.
    pub fn or(self, fallback: PartialConfig) -> PartialConfig {
        PartialConfig {
            experiment: self.experiment.or(fallback.experiment),
            n_modes: self.n_modes.or(fallback.n_modes),
            marked_index: self.marked_index.or(fallback.marked_index),
            n_iterations: self.n_iterations.or(fallback.n_iterations),
            n_shots: self.n_shots.or(fallback.n_shots),
            seed: self.seed.or(fallback.seed),
            output_format: self.output_format.or(fallback.output_format),
            output_path: self.output_path.or(fallback.output_path),
            basis_index: self.basis_index.or(fallback.basis_index),
            amplitudes: self.amplitudes.or(fallback.amplitudes),
        }
    }
}

/// A validated experiment configuration with defaults applied.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n_modes: usize,
    pub marked_index: Option<usize>,
    pub n_iterations: Option<u64>,
    pub n_shots: u64,
    pub seed: u64,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub basis_index: Option<usize>,
    pub amplitudes: Option<Vec<Complex64>>,
}

/// Loads the optional config file, lays `flags` over it, applies defaults
/// and validates. Flag values override file values field by field.
pub fn parse_config(
    file: Option<&Path>,
    flags: PartialConfig,
) -> Result<ExperimentConfig, CliError> {
    let mut merged = flags;
    if let Some(path) = file {
        let text = fs::read_to_string(path)?;
        merged = merged.or(PartialConfig::from_json_str(&text)?);
    }
    finalize(merged)
}

fn finalize(partial: PartialConfig) -> Result<ExperimentConfig, CliError> {
    let experiment = partial.experiment.ok_or_else(|| {
        invalid(
            "experiment",
            "required; one of grover, readout_demo, equivalence_check, resource_report",
        )
    })?;

    let amplitudes: Option<Vec<Complex64>> = partial
        .amplitudes
        .map(|v| v.into_iter().map(Complex64::from).collect());

    let n_modes = match (partial.n_modes, &amplitudes) {
        (Some(n), Some(a)) if n != a.len() => {
            return Err(invalid(
                "n_modes",
                format!("{} does not match the {} supplied amplitudes", n, a.len()),
            ));
        }
        (Some(n), _) => n,
        (None, Some(a)) => a.len(),
        (None, None) => return Err(invalid("n_modes", "required")),
    };
    if n_modes < 2 {
        return Err(invalid("n_modes", "a register needs at least 2 modes"));
    }

    let n_shots = partial.n_shots.unwrap_or(DEFAULT_N_SHOTS);
    if n_shots == 0 {
        return Err(invalid("n_shots", "at least one shot is required"));
    }

    if experiment != Experiment::ReadoutDemo {
        if amplitudes.is_some() {
            return Err(invalid(
                "amplitudes",
                "only used by the readout_demo experiment",
            ));
        }
        if partial.basis_index.is_some() {
            return Err(invalid(
                "basis_index",
                "only used by the readout_demo experiment",
            ));
        }
    }

    let mut marked_index = partial.marked_index;
    let mut n_iterations = partial.n_iterations;
    match experiment {
        Experiment::Grover | Experiment::ResourceReport => {
            if experiment == Experiment::Grover && marked_index.is_none() {
                return Err(invalid(
                    "marked_index",
                    "required for the grover experiment",
                ));
            }
            let marked = marked_index.unwrap_or(0);
            if marked >= n_modes {
                return Err(invalid(
                    "marked_index",
                    format!("{marked} out of range for {n_modes} modes"),
                ));
            }
            marked_index = Some(marked);
            n_iterations =
                Some(n_iterations.unwrap_or_else(|| processor::default_grover_iterations(n_modes)));
        }
        Experiment::EquivalenceCheck => {
            let trials = n_iterations.unwrap_or(DEFAULT_EQUIVALENCE_TRIALS);
            if trials == 0 {
                return Err(invalid("n_iterations", "at least one trial is required"));
            }
            n_iterations = Some(trials);
        }
        Experiment::ReadoutDemo => {
            match (&amplitudes, partial.basis_index) {
                (None, None) => {
                    return Err(invalid(
                        "basis_index",
                        "readout_demo needs either basis_index or amplitudes",
                    ));
                }
                (Some(_), Some(_)) => {
                    return Err(invalid("amplitudes", "cannot be combined with basis_index"));
                }
                (None, Some(i)) if i >= n_modes => {
                    return Err(invalid(
                        "basis_index",
                        format!("{i} out of range for {n_modes} modes"),
                    ));
                }
                _ => {}
            }
            if marked_index.is_some() {
                return Err(invalid(
                    "marked_index",
                    "only used by grover and resource_report",
                ));
            }
        }
    }

    Ok(ExperimentConfig {
        experiment,
        n_modes,
        marked_index,
        n_iterations,
        n_shots,
        seed: partial.seed.unwrap_or(DEFAULT_SEED),
        output_format: partial.output_format.unwrap_or_default(),
        output_path: partial.output_path,
        basis_index: partial.basis_index,
        amplitudes,
    })
}

/// Executes the configured experiment and delivers the report to
/// `output_path` or stdout. Identical (config, seed) pairs produce
/// byte-identical artifacts.
pub fn run_experiment(config: &ExperimentConfig) -> Result<(), CliError> {
    let styled = config.output_path.is_none()
        && config.output_format == OutputFormat::Table
        && io::stdout().is_terminal()
        && std::env::var_os("NO_COLOR").is_none();

    let mut buffer = Vec::new();
    let result = render_experiment(config, &mut buffer, styled);
    match result {
        Ok(()) => {
            deliver(config, &buffer)?;
            Ok(())
        }
        // A failed numeric check still delivers its report before the
        // nonzero exit; anything else aborts without an artifact.
        Err(err @ CliError::EquivalenceExceeded { .. }) => {
            deliver(config, &buffer)?;
            Err(err)
        }
        Err(err) => Err(err),
    }
}

fn deliver(config: &ExperimentConfig, buffer: &[u8]) -> Result<(), CliError> {
    match &config.output_path {
        Some(path) => fs::write(path, buffer)?,
        None => io::stdout().write_all(buffer)?,
    }
    Ok(())
}

/// Renders the experiment report into `out`. Split from [`run_experiment`]
/// so tests can capture bytes directly.
pub fn render_experiment(
    config: &ExperimentConfig,
    out: &mut dyn Write,
    styled: bool,
) -> Result<(), CliError> {
    match config.experiment {
        Experiment::Grover => render_grover(config, out, styled),
        Experiment::ReadoutDemo => render_readout_demo(config, out, styled),
        Experiment::EquivalenceCheck => render_equivalence(config, out, styled),
        Experiment::ResourceReport => render_resource_report(config, out, styled),
    }
}

fn title(text: &str, styled: bool) -> String {
    if styled {
        format!("\x1b[1m{text}\x1b[0m\n")
    } else {
        format!("{text}\n")
    }
}

fn histogram_table(histogram: &Histogram) -> String {
    let mut out = format!("{:>6}{:>12}{:>12}\n", "mode", "count", "frequency");
    for (mode, &count) in histogram.counts().iter().enumerate() {
        out.push_str(&format!(
            "{:>6}{:>12}{:>12.6}\n",
            mode,
            count,
            histogram.frequency(mode)
        ));
    }
    out
}

#[derive(Serialize)]
struct HistogramJson<'a> {
    counts: &'a [u64],
    total_shots: u64,
}

impl<'a> HistogramJson<'a> {
    fn new(h: &'a Histogram) -> Self {
        Self {
            counts: h.counts(),
            total_shots: h.total_shots(),
        }
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

fn render_grover(
    config: &ExperimentConfig,
    out: &mut dyn Write,
    styled: bool,
) -> Result<(), CliError> {
    let marked = config.marked_index.expect("validated");
    let iterations = config.n_iterations.expect("validated");
    let plan = GroverPlan::new(config.n_modes, marked, iterations)?;
    let outcome = processor::grover_run(&plan)?;
    let success_probability = decoder::mode_probability(&outcome.state, marked)?;
    let (padded, _) = decoder::pad_to_power_of_two(&outcome.state);
    let histogram = decoder::repeated_readout(&padded, config.n_shots, config.seed)?;
    let ledger = audit_grover(&plan, config.n_shots);
    let comparison = compare_with_classical(&ledger);

    match config.output_format {
        OutputFormat::Csv => out.write_all(histogram.to_csv().as_bytes())?,
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct GroverJson<'a> {
                experiment: Experiment,
                n_modes: usize,
                marked_index: usize,
                n_iterations: u64,
                n_shots: u64,
                seed: u64,
                success_probability: f64,
                histogram: HistogramJson<'a>,
                ledger: &'a ResourceLedger,
                comparison: &'a ComparisonReport,
            }
            write_json(
                out,
                &GroverJson {
                    experiment: Experiment::Grover,
                    n_modes: config.n_modes,
                    marked_index: marked,
                    n_iterations: iterations,
                    n_shots: config.n_shots,
                    seed: config.seed,
                    success_probability,
                    histogram: HistogramJson::new(&histogram),
                    ledger: &ledger,
                    comparison: &comparison,
                },
            )?;
        }
        OutputFormat::Table => {
            out.write_all(title("grover search", styled).as_bytes())?;
            out.write_all(
                format!(
                    "modes {}, marked {}, iterations {}, shots {}, seed {}\n",
                    config.n_modes, marked, iterations, config.n_shots, config.seed
                )
                .as_bytes(),
            )?;
            out.write_all(format!("success probability {success_probability:.6}\n\n").as_bytes())?;
            out.write_all(title("readout histogram", styled).as_bytes())?;
            out.write_all(histogram_table(&histogram).as_bytes())?;
            out.write_all(b"\n")?;
            out.write_all(title("resource ledger", styled).as_bytes())?;
            out.write_all(ledger.to_table().as_bytes())?;
            out.write_all(b"\n")?;
            out.write_all(title("classical comparison", styled).as_bytes())?;
            out.write_all(comparison.to_table().as_bytes())?;
        }
    }
    Ok(())
}

fn render_readout_demo(
    config: &ExperimentConfig,
    out: &mut dyn Write,
    styled: bool,
) -> Result<(), CliError> {
    let state = match (&config.amplitudes, config.basis_index) {
        (Some(amps), None) => SingleParticleState::new(amps.clone())?,
        (None, Some(index)) => SingleParticleState::basis_state(config.n_modes, index)?,
        _ => unreachable!("validated: exactly one state source"),
    };
    let (padded, n_padded_modes) = decoder::pad_to_power_of_two(&state);
    let record = decoder::sample_readout(&padded, config.seed)?;
    let (polled_mode, poll_steps) = decoder::binary_search_poll(&record.bits)?;
    let histogram = decoder::repeated_readout(&padded, config.n_shots, config.seed)?;

    match config.output_format {
        OutputFormat::Csv => out.write_all(histogram.to_csv().as_bytes())?,
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct ShotJson {
                bits: String,
                decoded_mode: usize,
                poll_steps: usize,
            }
            #[derive(Serialize)]
            struct ReadoutJson<'a> {
                experiment: Experiment,
                n_modes: usize,
                n_padded_modes: usize,
                n_shots: u64,
                seed: u64,
                shot: ShotJson,
                histogram: HistogramJson<'a>,
            }
            write_json(
                out,
                &ReadoutJson {
                    experiment: Experiment::ReadoutDemo,
                    n_modes: padded.n_modes(),
                    n_padded_modes,
                    n_shots: config.n_shots,
                    seed: config.seed,
                    shot: ShotJson {
                        bits: record.bit_string(),
                        decoded_mode: polled_mode,
                        poll_steps,
                    },
                    histogram: HistogramJson::new(&histogram),
                },
            )?;
        }
        OutputFormat::Table => {
            out.write_all(title("binary readout", styled).as_bytes())?;
            out.write_all(
                format!(
                    "modes {} ({} padded), shots {}, seed {}\n\n",
                    padded.n_modes(),
                    n_padded_modes,
                    config.n_shots,
                    config.seed
                )
                .as_bytes(),
            )?;
            out.write_all(
                format!(
                    "single shot: bits {}, decoded mode {}, poll steps {}\n\n",
                    record.bit_string(),
                    polled_mode,
                    poll_steps
                )
                .as_bytes(),
            )?;
            out.write_all(title("readout histogram", styled).as_bytes())?;
            out.write_all(histogram_table(&histogram).as_bytes())?;
        }
    }
    Ok(())
}

fn render_equivalence(
    config: &ExperimentConfig,
    out: &mut dyn Write,
    styled: bool,
) -> Result<(), CliError> {
    let trials = config.n_iterations.expect("validated");
    let n = config.n_modes;
    let basis = ModeBasis::fourier(n, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut deviations = Vec::with_capacity(trials as usize);
    for _ in 0..trials {
        let state = random_state(n, &mut rng)?;
        let unitary = processor::random_unitary(n, &mut rng)?;
        deviations.push(equivalence_check(&state, &unitary, &basis)?);
    }
    let max_abs_difference = deviations.iter().copied().fold(0.0, f64::max);
    let within_tolerance = max_abs_difference <= EQUIVALENCE_TOLERANCE;

    match config.output_format {
        OutputFormat::Csv => {
            out.write_all(b"trial,max_abs_difference\n")?;
            for (trial, dev) in deviations.iter().enumerate() {
                out.write_all(format!("{trial},{dev:e}\n").as_bytes())?;
            }
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct EquivalenceJson {
                experiment: Experiment,
                n_modes: usize,
                trials: u64,
                seed: u64,
                max_abs_difference: f64,
                tolerance: f64,
                within_tolerance: bool,
            }
            write_json(
                out,
                &EquivalenceJson {
                    experiment: Experiment::EquivalenceCheck,
                    n_modes: n,
                    trials,
                    seed: config.seed,
                    max_abs_difference,
                    tolerance: EQUIVALENCE_TOLERANCE,
                    within_tolerance,
                },
            )?;
        }
        OutputFormat::Table => {
            out.write_all(title("quantum vs classical correlation", styled).as_bytes())?;
            out.write_all(
                format!("modes {n}, trials {trials}, seed {}\n", config.seed).as_bytes(),
            )?;
            out.write_all(
                format!(
                    "max |dC| = {max_abs_difference:.3e} (tolerance {EQUIVALENCE_TOLERANCE:.0e})\n"
                )
                .as_bytes(),
            )?;
            out.write_all(
                format!(
                    "result: {}\n",
                    if within_tolerance {
                        "equivalent"
                    } else {
                        "DIVERGED"
                    }
                )
                .as_bytes(),
            )?;
        }
    }

    if within_tolerance {
        Ok(())
    } else {
        Err(CliError::EquivalenceExceeded {
            max_abs_difference,
            tolerance: EQUIVALENCE_TOLERANCE,
        })
    }
}

fn render_resource_report(
    config: &ExperimentConfig,
    out: &mut dyn Write,
    styled: bool,
) -> Result<(), CliError> {
    let marked = config.marked_index.expect("validated");
    let iterations = config.n_iterations.expect("validated");
    let plan = GroverPlan::new(config.n_modes, marked, iterations)?;
    let ledger = audit_grover(&plan, config.n_shots);
    let comparison = compare_with_classical(&ledger);

    match config.output_format {
        OutputFormat::Csv => {
            out.write_all(
                b"n_modes,n_detectors,readout_steps,oracle_queries,classical_unsorted_queries,readout_floor,no_speedup_without_encoded_oracle\n",
            )?;
            out.write_all(
                format!(
                    "{},{},{},{},{},{},{}\n",
                    comparison.n_modes,
                    comparison.n_detectors,
                    comparison.readout_steps,
                    comparison.oracle_queries,
                    comparison.classical_unsorted_queries,
                    comparison.readout_floor,
                    comparison.no_speedup_without_encoded_oracle
                )
                .as_bytes(),
            )?;
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct ResourceJson<'a> {
                experiment: Experiment,
                ledger: &'a ResourceLedger,
                comparison: &'a ComparisonReport,
            }
            write_json(
                out,
                &ResourceJson {
                    experiment: Experiment::ResourceReport,
                    ledger: &ledger,
                    comparison: &comparison,
                },
            )?;
        }
        OutputFormat::Table => {
            out.write_all(title("resource ledger", styled).as_bytes())?;
            out.write_all(ledger.to_table().as_bytes())?;
            out.write_all(b"\n")?;
            out.write_all(title("classical comparison", styled).as_bytes())?;
            out.write_all(comparison.to_table().as_bytes())?;
        }
    }
    Ok(())
}
