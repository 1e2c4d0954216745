//! Command-line front end: `cvteleport sweep | separability | optimize | montecarlo`.
//!
//! Exit codes: `0` success, `2` usage or configuration error, `3` numerical
//! failure.

pub mod config;
pub mod format;
pub mod sweep;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::channel::{
    bisect_separability_threshold, channel_moments, channel_state, is_separable,
    separability_threshold, ChannelMoments, ChannelParams,
};
use crate::gaussian::PhasePoint;
use crate::optimize::{
    optimal_gain, optimal_receiver_transmittance, optimal_receiver_transmittance_numeric,
    optimal_squeezing, optimal_squeezing_numeric, OptimumMethod, OptimumResult,
    SQUEEZING_SEARCH_MAX,
};
use crate::teleport::{lossy_sender_fidelity, mc_fidelity, FidelityReport, ProtocolConfig};
use crate::Error;
use config::{Settings, SweepRange, SweepSpec, SweepVar, SEED_ENV};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

/// Default Monte-Carlo sample count for `cvteleport montecarlo`.
pub const DEFAULT_MC_SAMPLES: usize = 200_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(msg) => CliError::Usage(msg),
            Error::Unsupported(_) | Error::DimensionMismatch { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Usage(format!("write failed: {e}"))
}

#[derive(Debug, Parser)]
#[command(name = "cvteleport", version, about = "Continuous-variable teleportation through noisy Gaussian channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep one channel parameter and print a CSV of moments, separability and fidelity
    Sweep(SweepArgs),
    /// Separability margin, verdict and threshold R_a for one channel
    Separability(ChannelArgs),
    /// Optimal squeezing, receiver transmittance or feed-forward gain
    Optimize(OptimizeArgs),
    /// Monte-Carlo fidelity of the full protocol for one coherent input
    Montecarlo(MonteCarloArgs),
}

#[derive(Debug, Args, Default)]
struct ChannelArgs {
    /// Two-mode squeezing parameter
    #[arg(long)]
    s: Option<f64>,
    /// Sender-arm reflectivity R_a
    #[arg(long)]
    ra: Option<f64>,
    /// Receiver-arm reflectivity R_b
    #[arg(long)]
    rb: Option<f64>,
    /// Sender-arm thermal occupation
    #[arg(long)]
    na: Option<f64>,
    /// Receiver-arm thermal occupation
    #[arg(long)]
    nb: Option<f64>,
}

#[derive(Debug, Args, Default)]
struct ProtocolArgs {
    /// Feed-forward gain
    #[arg(long)]
    gain: Option<f64>,
    /// Homodyne detector efficiency
    #[arg(long)]
    eta: Option<f64>,
    /// Transmittance of the displacement beam splitter (1 = unitary)
    #[arg(long)]
    tdisp: Option<f64>,
    /// Real part of the coherent input amplitude
    #[arg(long, allow_hyphen_values = true)]
    alpha_re: Option<f64>,
    /// Imaginary part of the coherent input amplitude
    #[arg(long, allow_hyphen_values = true)]
    alpha_im: Option<f64>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Flat `key = value` config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Swept parameter: s, R_a, R_b, n_bar_a or n_bar_b
    #[arg(long)]
    var: Option<String>,
    /// Grid as start:stop:steps
    #[arg(long)]
    range: Option<String>,
    /// Shorthand for `--var s --range start:stop:steps`
    #[arg(long, conflicts_with_all = ["var", "range"])]
    s_range: Option<String>,
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    protocol: ProtocolArgs,
    /// Add Monte-Carlo columns with this many samples per row
    #[arg(long)]
    mc: Option<usize>,
    /// Base seed; row i uses seed + i
    #[arg(long)]
    seed: Option<u64>,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OptimizeMode {
    Squeezing,
    Receiver,
    Gain,
}

#[derive(Debug, Args)]
struct OptimizeArgs {
    #[arg(long, value_enum)]
    mode: OptimizeMode,
    /// Squeezing (receiver and gain modes)
    #[arg(long)]
    s: Option<f64>,
    /// Sender-arm transmittance T_a
    #[arg(long)]
    ta: Option<f64>,
    /// Receiver-arm transmittance T_b (squeezing mode)
    #[arg(long)]
    tb: Option<f64>,
    /// Sender-arm thermal occupation
    #[arg(long)]
    na: Option<f64>,
    /// Receiver-arm thermal occupation (squeezing mode)
    #[arg(long)]
    nb: Option<f64>,
}

#[derive(Debug, Args)]
struct MonteCarloArgs {
    /// Flat `key = value` config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    protocol: ProtocolArgs,
    /// Number of Monte-Carlo samples
    #[arg(long = "n")]
    n_samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

impl ChannelArgs {
    fn settings(&self) -> Settings {
        Settings {
            s: self.s,
            r_a: self.ra,
            r_b: self.rb,
            n_bar_a: self.na,
            n_bar_b: self.nb,
            ..Settings::default()
        }
    }
}

impl ProtocolArgs {
    fn apply(&self, st: Settings) -> Settings {
        Settings {
            gain: self.gain,
            eta: self.eta,
            t_disp: self.tdisp,
            alpha_re: self.alpha_re,
            alpha_im: self.alpha_im,
            ..st
        }
    }
}

fn load(config: &Option<PathBuf>) -> Result<Settings, CliError> {
    match config {
        Some(path) => Settings::from_file(path),
        None => Ok(Settings::default()),
    }
}

fn env_seed() -> Option<String> {
    std::env::var(SEED_ENV).ok()
}

/// Runs the CLI, writing results to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{text}");
            return EXIT_OK;
        }
    };
    let result = match cli.command {
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Separability(a) => cmd_separability(a, out),
        Command::Optimize(a) => cmd_optimize(a, out),
        Command::Montecarlo(a) => cmd_montecarlo(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn main_with_args<I: IntoIterator<Item = OsString>>(args: I) -> ExitCode {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run(args, &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code)
}

fn parse_flag<T: std::str::FromStr<Err = String>>(raw: &Option<String>) -> Result<Option<T>, CliError> {
    raw.as_deref()
        .map(|s| s.parse().map_err(CliError::Usage))
        .transpose()
}

fn cmd_sweep(a: SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let file = load(&a.config)?;
    let mut flags = a.protocol.apply(a.channel.settings());
    flags.var = parse_flag::<SweepVar>(&a.var)?;
    flags.range = parse_flag::<SweepRange>(&a.range)?;
    if let Some(r) = parse_flag::<SweepRange>(&a.s_range)? {
        flags.var = Some(SweepVar::S);
        flags.range = Some(r);
    }
    flags.mc = a.mc;
    flags.seed = a.seed;
    let settings = file.overlay(flags);
    let spec = SweepSpec::from_settings(&settings, env_seed().as_deref())?;
    let rows = sweep::sweep_rows(&spec)?;
    match &a.out {
        Some(path) => {
            let mut buf = Vec::new();
            sweep::write_csv(&rows, &mut buf).map_err(io_err)?;
            std::fs::write(path, buf)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
        }
        None => sweep::write_csv(&rows, out).map_err(io_err),
    }
}

fn emit<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<(), CliError> {
    let text = format::to_json(value).map_err(|e| CliError::Numerical(e.to_string()))?;
    writeln!(out, "{text}").map_err(io_err)
}

#[derive(Serialize)]
struct SeparabilityReport {
    params: ChannelParams,
    moments: ChannelMoments,
    margin: f64,
    separable: bool,
    /// Smallest R_a at which the channel is separable; `null` if none.
    threshold_r_a: Option<f64>,
    threshold_method: OptimumMethod,
}

fn cmd_separability(a: ChannelArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let params = a.settings().channel()?;
    let moments = channel_moments(&params);
    let verdict = is_separable(&moments);
    let threshold_r_a = separability_threshold(&params)?;
    let closed = params.n_bar_b == 0.0 && params.s > 0.0 && params.r_b < 1.0;
    // cross-check the closed form against bisection before reporting it
    if closed {
        if let (Some(c), Some(b)) = (threshold_r_a, bisect_separability_threshold(&params)?) {
            if (c - b).abs() > 1e-6 {
                return Err(CliError::Numerical(format!(
                    "threshold mismatch: closed form {c}, bisection {b}"
                )));
            }
        }
    }
    emit(
        &SeparabilityReport {
            params,
            moments,
            margin: verdict.margin,
            separable: verdict.separable,
            threshold_r_a,
            threshold_method: if closed { OptimumMethod::ClosedForm } else { OptimumMethod::Numeric },
        },
        out,
    )
}

#[derive(Serialize)]
struct OptimizeReport {
    mode: &'static str,
    inputs: serde_json::Value,
    optimum: OptimumResult,
    /// Independent estimate by the other method, when one applies.
    cross_check: Option<OptimumResult>,
}

fn require(name: &str, v: Option<f64>) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{name} is required for this mode")))
}

fn cmd_optimize(a: OptimizeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let n_a = a.na.unwrap_or(0.0);
    let n_b = a.nb.unwrap_or(0.0);
    let report = match a.mode {
        OptimizeMode::Squeezing => {
            let t_a = require("ta", a.ta)?;
            let t_b = require("tb", a.tb)?;
            let optimum = optimal_squeezing(t_a, t_b, n_a, n_b)?;
            let cross_check = match optimum.argument.finite() {
                Some(_) => Some(optimal_squeezing_numeric(t_a, t_b, n_a, n_b, SQUEEZING_SEARCH_MAX)?),
                None => None,
            };
            OptimizeReport {
                mode: "squeezing",
                inputs: serde_json::json!({"t_a": t_a, "t_b": t_b, "n_bar_a": n_a, "n_bar_b": n_b}),
                optimum,
                cross_check,
            }
        }
        OptimizeMode::Receiver => {
            let s = require("s", a.s)?;
            let t_a = require("ta", a.ta)?;
            let optimum = optimal_receiver_transmittance(s, t_a, n_a)?;
            let cross_check = match optimum.method {
                OptimumMethod::ClosedForm => Some(optimal_receiver_transmittance_numeric(s, t_a, n_a)?),
                OptimumMethod::Numeric => None,
            };
            OptimizeReport {
                mode: "receiver",
                inputs: serde_json::json!({"s": s, "t_a": t_a, "n_bar_a": n_a}),
                optimum,
                cross_check,
            }
        }
        OptimizeMode::Gain => {
            let s = require("s", a.s)?;
            let t_a = require("ta", a.ta)?;
            let optimum = optimal_gain(s, t_a)?;
            let closed = OptimumResult {
                argument: crate::optimize::OptimumArgument::Finite(1.0 / t_a.sqrt()),
                value: lossy_sender_fidelity(s, t_a)?,
                method: OptimumMethod::ClosedForm,
                bracket: None,
            };
            OptimizeReport {
                mode: "gain",
                inputs: serde_json::json!({"s": s, "t_a": t_a}),
                optimum,
                cross_check: Some(closed),
            }
        }
    };
    emit(&report, out)
}

#[derive(Serialize)]
struct MonteCarloOutput {
    params: ChannelParams,
    alpha: PhasePoint,
    protocol: ProtocolConfig,
    #[serde(flatten)]
    report: FidelityReport,
}

fn cmd_montecarlo(a: MonteCarloArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let file = load(&a.config)?;
    let mut flags = a.protocol.apply(a.channel.settings());
    flags.mc = a.n_samples;
    flags.seed = a.seed;
    let settings = file.overlay(flags);
    let params = settings.channel()?;
    let protocol = settings.protocol()?;
    let alpha = settings.alpha()?;
    let seed = settings.resolve_seed(env_seed().as_deref())?;
    let n = settings.mc.unwrap_or(DEFAULT_MC_SAMPLES);
    let state = channel_state(&params)?;
    let report = mc_fidelity(&state, alpha, &protocol, n, seed)?;
    emit(&MonteCarloOutput { params, alpha, protocol, report }, out)
}
