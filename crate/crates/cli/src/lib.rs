//! Command-line front end: argument parsing, input loading, report emission.

// negated comparisons are used to reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub mod commands;
pub mod input;
pub mod report;

pub use report::{Format, Report};

/// Default tolerance for input validation (completeness of loaded sets).
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] mspace_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Every error reaching the top level is an input problem.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

#[derive(Debug, Parser)]
#[command(name = "mspace", version, about = "Measurement-space states, their entanglement and related checks")]
pub struct Cli {
    /// Completeness tolerance for loaded measurement sets.
    #[arg(long, global = true, env = "MSPACE_DEFAULT_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Map a state to measurement space.
    Map(MapArgs),
    /// Entanglement of a state and, with local sets, of its image.
    Entanglement(EntanglementArgs),
    /// Success probability of a verification protocol, original vs measurement space.
    Theorem1(Theorem1Args),
    /// Run the LOCC construction that prepares the measurement-space state.
    Locc(LoccArgs),
    /// Concurrence under local channels.
    Konrad(KonradArgs),
    /// Mode-entanglement bounds for n particles in m modes.
    Modes(ModesArgs),
    /// Operational entanglement against detector efficiency.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[arg(long)]
    pub state: String,
    /// Measurement set on the whole state.
    #[arg(long, conflicts_with_all = ["alice", "bob"])]
    pub measurements: Option<String>,
    #[arg(long, requires = "bob")]
    pub alice: Option<String>,
    #[arg(long, requires = "alice")]
    pub bob: Option<String>,
}

#[derive(Debug, Args)]
pub struct EntanglementArgs {
    #[arg(long)]
    pub state: String,
    #[arg(long, requires = "bob")]
    pub alice: Option<String>,
    #[arg(long, requires = "alice")]
    pub bob: Option<String>,
    /// entropy, concurrence or eof.
    #[arg(long, default_value = "entropy")]
    pub measure: String,
    /// Regroup the state as an a×b bipartite system.
    #[arg(long, value_name = "A,B")]
    pub split: Option<String>,
}

#[derive(Debug, Args)]
pub struct Theorem1Args {
    /// Protocol file or built-in name (noisy-alice:<eta>, perfect, always-succeed).
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    pub protocol: Option<String>,
    #[arg(long)]
    pub random: bool,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fixed d_A,d_B; drawn from {2,3,4} per trial when absent.
    #[arg(long, value_name = "DA,DB")]
    pub dims: Option<String>,
    /// Fixed Alice outcome count; drawn from {2,3,4} per trial when absent.
    #[arg(long)]
    pub outcomes: Option<usize>,
}

#[derive(Debug, Args)]
pub struct LoccArgs {
    #[arg(long)]
    pub state: String,
    #[arg(long)]
    pub alice: String,
    #[arg(long)]
    pub bob: String,
    /// Run a single branch j_A,j_B.
    #[arg(long, value_name = "JA,JB", conflicts_with = "all_outcomes")]
    pub outcome: Option<String>,
    /// Run every branch (the default).
    #[arg(long)]
    pub all_outcomes: bool,
}

#[derive(Debug, Args)]
pub struct KonradArgs {
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub two_sided: bool,
    /// random, identity, depolarizing or damping:<gamma>.
    #[arg(long, default_value = "random")]
    pub channel: String,
}

#[derive(Debug, Args)]
pub struct ModesArgs {
    #[arg(long, requires = "m_max", conflicts_with_all = ["n", "m"])]
    pub n_max: Option<u64>,
    #[arg(long, requires = "n_max")]
    pub m_max: Option<u64>,
    #[arg(long, requires = "m")]
    pub n: Option<u64>,
    #[arg(long, requires = "n")]
    pub m: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0.5)]
    pub eta_start: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eta_end: f64,
    #[arg(long, default_value_t = 6)]
    pub steps: usize,
    #[arg(long, default_value = "bell")]
    pub state: String,
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(CliError::Usage(format!("tolerance must be positive, got {}", cli.tol)));
    }
    match &cli.command {
        Command::Map(a) => commands::map(a, cli.tol),
        Command::Entanglement(a) => commands::entanglement(a, cli.tol),
        Command::Theorem1(a) => commands::theorem1(a, cli.tol),
        Command::Locc(a) => commands::locc(a, cli.tol),
        Command::Konrad(a) => commands::konrad(a),
        Command::Modes(a) => commands::modes(a),
        Command::Sweep(a) => commands::sweep(a),
    }
}

/// Parses `"a,b"` into two values.
pub(crate) fn parse_pair<T: std::str::FromStr>(text: &str, what: &str) -> Result<(T, T), CliError> {
    let bad = || CliError::Usage(format!("expected {what} as two comma-separated values, got {text:?}"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}
