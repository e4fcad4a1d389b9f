//! Batch front end: generate instances, build games, construct equilibria,
//! verify regrets, run recovery protocols, and sweep experiments.
//!
//! Output is JSON on stdout (or `--out`), CSV for sweep summaries. Identical
//! invocations produce byte-identical output; wall-clock timings are only
//! emitted under `--timings`. Exit codes: 0 success / verified, 1 verification
//! or recovery failed, 2 invalid input.

mod commands;
mod records;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "two-cycle",
    version,
    about = "2-cycle game toolkit",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    Ce,
    Rce,
    Cce,
    Ne,
    Wsne,
    Bne,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum TrivialKind {
    /// Uniform distribution over all action pairs.
    Uniform,
    /// Two-cell exact coarse correlated equilibrium.
    Cce,
    /// Banded correlated construction (zero-prefix instances).
    Ace,
    /// Flat strategy pair (zero-prefix instances).
    Ane,
    /// Layer-wise well-supported pair, renormalized.
    Wsne,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum RecoverKindArg {
    Correlated,
    Nash,
    Wsne,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Correlated,
    Nash,
    Wsne,
    Bayesian,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Args)]
pub struct GenArgs {
    /// String length (layers per side).
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Pin the disputed index.
    #[arg(long)]
    pub disputed: Option<usize>,
    /// Force x_i = y_i = 0 for i up to this position.
    #[arg(long)]
    pub zero_prefix: Option<usize>,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub game: std::path::PathBuf,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args)]
pub struct TrivialArgs {
    #[arg(long, value_enum)]
    pub kind: TrivialKind,
    #[arg(long)]
    pub game: std::path::PathBuf,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub game: std::path::PathBuf,
    #[arg(long)]
    pub dist: std::path::PathBuf,
    #[arg(long, value_enum)]
    pub kind: VerifyKind,
    /// Verification threshold: pass when measured regret <= epsilon.
    #[arg(long)]
    pub epsilon: f64,
    /// Type count, required for --kind bne.
    #[arg(long = "T")]
    pub types: Option<usize>,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args)]
pub struct RecoverArgs {
    #[arg(long)]
    pub game: std::path::PathBuf,
    #[arg(long)]
    pub dist: std::path::PathBuf,
    #[arg(long, value_enum)]
    pub kind: RecoverKindArg,
    /// Claimed regret of the distribution; measured when omitted.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args)]
pub struct BayesianArgs {
    #[arg(long)]
    pub game: std::path::PathBuf,
    /// Number of types to split the strings into.
    #[arg(long = "T")]
    pub types: usize,
    /// Per-type profile file; exact per-type equilibria are constructed when
    /// omitted.
    #[arg(long)]
    pub dist: Option<std::path::PathBuf>,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub kind: SweepKind,
    /// Layer-count range, e.g. 3..16 (inclusive).
    #[arg(long)]
    pub n_range: String,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Perturbation scale override for correlated sweeps.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Type count for bayesian sweeps.
    #[arg(long = "T")]
    pub types: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
    /// Include wall-clock timings (breaks byte-identical output).
    #[arg(long)]
    pub timings: bool,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a promise instance.
    Gen(GenArgs),
    /// Build a game from an instance file and report its structure.
    Build(BuildArgs),
    /// Construct one of the explicit equilibria for an instance.
    Trivial(TrivialArgs),
    /// Measure the regret of a distribution file against a threshold.
    Verify(VerifyArgs),
    /// Run the recovery protocol matching an equilibrium kind.
    Recover(RecoverArgs),
    /// Split an instance into typed sub-games and run Bayesian recovery.
    Bayesian(BayesianArgs),
    /// Seeded batch runs over a range of sizes.
    Sweep(SweepArgs),
}

fn init_logging() {
    let level = match std::env::var("TWO_CYCLE_LOG").ok().as_deref() {
        Some("info") => log::LevelFilter::Info,
        Some("debug") => log::LevelFilter::Debug,
        _ => log::LevelFilter::Off,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .init();
}

fn main() -> ExitCode {
    init_logging();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => commands::gen(args),
        Command::Build(args) => commands::build(args),
        Command::Trivial(args) => commands::trivial(args),
        Command::Verify(args) => commands::verify(args),
        Command::Recover(args) => commands::recover(args),
        Command::Bayesian(args) => commands::bayesian(args),
        Command::Sweep(args) => commands::sweep(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
