//! `teleqkd`: workbench front end for rate analysis, threshold searches,
//! curve sweeps, Monte Carlo protocol simulation, and self-verification.
//!
//! Exit codes: 0 on success (including "insecure" verdicts and no-threshold
//! results), 2 on invalid input, 1 on internal failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use teleqkd_core::QkdError;

/// Errors split by which exit code they map to.
#[derive(Debug)]
pub enum AppError {
    /// Invalid input or configuration: exit code 2.
    Invalid(String),
    /// Internal failure (I/O, broken invariant): exit code 1.
    Internal(String),
}

impl From<QkdError> for AppError {
    fn from(e: QkdError) -> Self {
        AppError::Invalid(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Internal(e.to_string())
    }
}

pub type CmdResult = Result<(), AppError>;

#[derive(Debug, Parser)]
#[command(
    name = "teleqkd",
    about = "Security analysis and simulation of BB84 and teleportation-based (GR10) QKD",
    version
)]
struct Cli {
    /// Plain-text configuration file (`key = value` per line, `#` comments);
    /// command-line flags take precedence, unknown keys are errors.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Compute the secret-key fraction for one set of observed statistics.
    Analyze(AnalyzeArgs),
    /// Locate the security boundary r = 0 of a model.
    Threshold(ThresholdArgs),
    /// Sweep a parameter and write the rate curve as CSV.
    Curve(CurveArgs),
    /// Run a seeded Monte Carlo protocol simulation.
    Simulate(SimulateArgs),
    /// Run the built-in cross-verification suites.
    Verify(VerifyArgs),
}

/// Purification model selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Bb84Std,
    Bb84Alt,
    Gr10,
    Gr10Mod,
}

/// Protocol selector for simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Protocol {
    Bb84,
    Bb84KeepAll,
    Gr10,
    Gr10Mod,
}

/// Attack selector for simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Attack {
    None,
    Depolarizing,
    InterceptResend,
    Purification,
}

/// Eve's measurement basis policy for intercept-resend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisPolicy {
    Z,
    X,
    Random,
}

/// Scanned parameter of a threshold search or curve sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    /// Symmetric error rate (εx = εz).
    Eps,
    /// x-basis error rate.
    EpsX,
    /// Relative deviation of agreement.
    DeltaX,
    /// Agreement parameter p.
    P,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    #[arg(long)]
    pub eps_x: Option<f64>,
    #[arg(long)]
    pub eps_z: Option<f64>,
    /// Agreement parameter p (gr10-mod).
    #[arg(long)]
    pub p: Option<f64>,
    /// Relative deviation of agreement Δx (gr10-mod).
    #[arg(long)]
    pub delta_x: Option<f64>,
    /// Reconciliation efficiency β.
    #[arg(long)]
    pub beta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    /// Scan the symmetric error rate εx = εz (BB84 models).
    #[arg(long)]
    pub symmetric: bool,
    /// Which parameter to scan (gr10-mod: delta-x or p).
    #[arg(long = "in", value_enum)]
    pub scan: Option<SweepParam>,
    /// Fixed agreement parameter p when scanning delta-x.
    #[arg(long)]
    pub p: Option<f64>,
    /// Fixed relative deviation when scanning p.
    #[arg(long)]
    pub delta_x: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    /// Swept parameter (eps for BB84 models, eps-x for gr10, delta-x or p
    /// for gr10-mod).
    #[arg(long, value_enum)]
    pub param: Option<SweepParam>,
    #[arg(long)]
    pub lo: Option<f64>,
    #[arg(long)]
    pub hi: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Agreement parameter values (repeatable; gr10-mod delta-x sweeps).
    #[arg(long = "p")]
    pub p: Vec<f64>,
    /// Fixed relative deviation (gr10-mod p sweeps).
    #[arg(long)]
    pub delta_x: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Output CSV path.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub protocol: Option<Protocol>,
    #[arg(long)]
    pub rounds: Option<u64>,
    #[arg(long)]
    pub n1: Option<f64>,
    #[arg(long)]
    pub n2: Option<f64>,
    /// Probability that a sifted round is disclosed for error estimation.
    #[arg(long)]
    pub disclose_fraction: Option<f64>,
    #[arg(long, value_enum)]
    pub attack: Option<Attack>,
    /// Depolarizing strength ε.
    #[arg(long)]
    pub attack_eps: Option<f64>,
    /// Eve's basis policy for intercept-resend.
    #[arg(long, value_enum)]
    pub intercept_basis: Option<BasisPolicy>,
    /// Purification model of a purification attack.
    #[arg(long, value_enum)]
    pub pur_model: Option<Model>,
    /// Comma-separated Schmidt weights λ1,λ2,λ3,λ4 of a purification attack.
    #[arg(long)]
    pub lambdas: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Output directory for default file names (overrides $TELEQKD_OUT_DIR).
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// Transcript file path (default `<out-dir>/transcript.txt`).
    #[arg(long, value_name = "FILE")]
    pub transcript: Option<PathBuf>,
    /// Summary CSV path (default `<out-dir>/summary.csv`).
    #[arg(long, value_name = "FILE")]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Which suite to run.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Random draws in the teleportation oracle suite.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Perturb a reference value to confirm the harness reports mismatches.
    #[arg(long)]
    pub inject_fault: bool,
}

fn run() -> CmdResult {
    let cli = Cli::parse();
    let file_config = config::load(cli.config.as_deref())?;
    match cli.cmd {
        Cmd::Analyze(args) => commands::analyze::run(args, file_config),
        Cmd::Threshold(args) => commands::threshold::run(args, file_config),
        Cmd::Curve(args) => commands::curve::run(args, file_config),
        Cmd::Simulate(args) => commands::simulate::run(args, file_config),
        Cmd::Verify(args) => commands::verify::run(args, file_config),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
