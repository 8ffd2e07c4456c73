//! Argument parsing and report rendering for the `nqi-sim` binary.

mod report;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{ArgGroup, Parser, ValueEnum};
use nqi_core::{Amplitude, AtomSuperposition, ExperimentConfig, NqiError, Path, Scheme};

pub use report::{CategoryRow, ConfigEcho, JsonReport, McReport, OutcomeRow};

/// Environment variable capping Monte Carlo worker threads.
pub const THREADS_ENV: &str = "NQI_SIM_THREADS";

/// Slack allowed on `|alpha|^2 + |beta|^2` before the pair is renormalized.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Arm {
    Lower,
    Upper,
}

#[derive(Debug, Parser)]
#[command(
    name = "nqi-sim",
    version,
    about = "Exact and sampled outcome statistics for interaction-free atom interrogation",
    allow_negative_numbers = true,
    group = ArgGroup::new("amplitudes").multiple(true).args(["alpha_re", "alpha_im", "beta_re", "beta_im"]),
)]
struct Args {
    /// Probe scheme (see --list)
    #[arg(long, default_value = "epr-linear")]
    scheme: Scheme,
    /// Real part of the m+ amplitude
    #[arg(long)]
    alpha_re: Option<f64>,
    /// Imaginary part of the m+ amplitude
    #[arg(long)]
    alpha_im: Option<f64>,
    /// Real part of the m- amplitude
    #[arg(long)]
    beta_re: Option<f64>,
    /// Imaginary part of the m- amplitude
    #[arg(long)]
    beta_im: Option<f64>,
    /// Atom state as Bloch angles: (cos theta/2, e^{i phi} sin theta/2)
    #[arg(long, value_name = "THETA,PHI", conflicts_with = "amplitudes")]
    bloch: Option<String>,
    /// Keep the given global phase instead of making alpha real and non-negative
    #[arg(long)]
    keep_phase: bool,
    /// Put the atom in the interferometer (default)
    #[arg(long, conflicts_with = "no_atom")]
    atom: bool,
    /// Run with an empty interferometer
    #[arg(long)]
    no_atom: bool,
    /// Arm holding the atom
    #[arg(long, value_enum, default_value_t = Arm::Lower)]
    arm: Arm,
    /// Rounds to repeat while nothing is detected
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    rounds: u32,
    /// Monte Carlo trials drawn from the exact distribution (0 to skip)
    #[arg(long, default_value_t = 0)]
    mc_trials: u64,
    /// Monte Carlo seed
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the probe schemes and exit
    #[arg(long)]
    list: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRequest {
    pub config: ExperimentConfig,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub list: bool,
    pub workers: usize,
}

impl Default for RunRequest {
    fn default() -> Self {
        Self {
            config: ExperimentConfig::default(),
            format: OutputFormat::Text,
            out: None,
            list: false,
            workers: 1,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Usage(#[from] clap::Error),
    #[error("{0}")]
    Invalid(String),
    #[error("simulation failed: {0}")]
    Simulation(#[from] NqiError),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(e) => e.exit_code(),
            CliError::Invalid(_) => 2,
            CliError::Simulation(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => CliError::Io(io),
            other => CliError::Invalid(format!("csv: {other:?}")),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

/// Parse a full argv (program name first). Worker count is left at 1; see
/// [`workers_from_env`].
pub fn parse_args<I, T>(argv: I) -> Result<RunRequest, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(argv)?;
    let atom = atom_from_args(&args)?;
    let config = ExperimentConfig {
        scheme: args.scheme,
        atom,
        atom_present: !args.no_atom,
        atom_arm: match args.arm {
            Arm::Lower => Path::Lower,
            Arm::Upper => Path::Upper,
        },
        max_rounds: args.rounds,
        mc_trials: args.mc_trials,
        rng_seed: args.seed,
    };
    Ok(RunRequest {
        config,
        format: args.format,
        out: args.out,
        list: args.list,
        workers: 1,
    })
}

fn atom_from_args(args: &Args) -> Result<AtomSuperposition, CliError> {
    let atom = if let Some(bloch) = &args.bloch {
        let angles: Vec<f64> = bloch
            .split(',')
            .map(|part| part.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Invalid(format!("--bloch expects THETA,PHI: {e}")))?;
        let [theta, phi] = angles[..] else {
            return Err(CliError::Invalid(format!(
                "--bloch expects THETA,PHI, got `{bloch}`"
            )));
        };
        if !theta.is_finite() || !phi.is_finite() {
            return Err(CliError::Invalid("--bloch angles must be finite".into()));
        }
        AtomSuperposition::from_bloch(theta, phi)
    } else if [args.alpha_re, args.alpha_im, args.beta_re, args.beta_im]
        .iter()
        .all(Option::is_none)
    {
        AtomSuperposition::equal_weight()
    } else {
        let part = |x: Option<f64>| x.unwrap_or(0.0);
        let alpha = Amplitude::new(part(args.alpha_re), part(args.alpha_im));
        let beta = Amplitude::new(part(args.beta_re), part(args.beta_im));
        let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(CliError::Invalid(format!(
                "atom amplitudes must satisfy |alpha|^2 + |beta|^2 = 1, got {norm_sqr}"
            )));
        }
        AtomSuperposition::normalized(alpha, beta).map_err(|e| CliError::Invalid(e.to_string()))?
    };
    Ok(if args.keep_phase {
        atom
    } else {
        atom.with_canonical_phase()
    })
}

/// Monte Carlo worker count from [`THREADS_ENV`], falling back to the number
/// of available cores.
pub fn workers_from_env() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Run the request and write the report in the requested format.
pub fn execute(request: &RunRequest, out: &mut dyn Write) -> Result<(), CliError> {
    if request.list {
        return report::write_catalog(out);
    }
    let report = JsonReport::build(&request.config, request.workers)?;
    match request.format {
        OutputFormat::Text => report::write_text(&report, out),
        OutputFormat::Json => report::write_json(&report, out),
        OutputFormat::Csv => report::write_csv(&report, out),
    }
}

/// Re-emit a previously written Json report.
pub fn reformat_json(input: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let report: JsonReport = serde_json::from_str(input)?;
    report::write_json(&report, out)
}
