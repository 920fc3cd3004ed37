//! `qratio`: principal ratios, kite formulas and brute-force checks from the
//! command line.

mod commands;
mod error;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;
use qratio::DEFAULT_TOL;

#[derive(Parser, Debug)]
#[command(
    name = "qratio",
    version,
    about = "Principal ratio of the signless Laplacian"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Relative convergence tolerance for the Perron vector, in (0, 1e-3].
    #[arg(long, global = true, default_value_t = DEFAULT_TOL, value_parser = parse_tol)]
    pub tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = Output::Table)]
    pub output: Output,

    /// Fail on the first malformed or disconnected input instead of skipping it.
    #[arg(long, global = true)]
    pub strict: bool,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Principal ratio, q1 and the min -> max path of a graph.
    Ratio(GraphArgs),
    /// Ratio of the kite P_k . K_(n-k+1) through the U_(k-1) formula.
    Kite {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Default: log when k > 100.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
    },
    /// Kite path length with the largest ratio for a given order.
    BestKite {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::Log)]
        mode: Mode,
    },
    /// Exhaustive search for the largest ratio.
    Search {
        /// Order of the native corpus (2..=7).
        #[arg(long, conflicts_with = "input")]
        n: Option<usize>,
        /// graph6 file of one order, or "-" for stdin.
        #[arg(long)]
        input: Option<String>,
        /// Only slice i of m of the native corpus, as "i/m".
        #[arg(long, requires = "n")]
        chunk: Option<ChunkSpec>,
        /// Ranking rows shown in table output (0: all).
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Run a verification suite and stream its findings.
    Check(CheckArgs),
    /// Best-kite asymptotics for a list of orders.
    Scan {
        /// Comma-separated orders, each >= 10.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct GraphArgs {
    #[arg(long, value_enum, conflicts_with_all = ["graph6", "input"])]
    pub builtin: Option<Builtin>,
    /// Order of the builtin graph.
    #[arg(long)]
    pub n: Option<usize>,
    /// Path length for the kite builtin.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, conflicts_with = "input")]
    pub graph6: Option<String>,
    /// graph6 file, or "-" for stdin.
    #[arg(long)]
    pub input: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Sweep every native order from 2 up to this one.
    #[arg(long, conflicts_with_all = ["input", "graph6", "builtin"])]
    pub n_max: Option<usize>,
    /// Only slice i of m of the native corpus, as "i/m" (needs --n).
    #[arg(long, requires = "n")]
    pub chunk: Option<ChunkSpec>,
    /// Emit every finding, not only violations.
    #[arg(long)]
    pub all: bool,
    #[command(flatten)]
    pub graph: GraphArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Output {
    Table,
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Linear,
    Log,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Path,
    Cycle,
    Complete,
    Star,
    Kite,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Universal,
    Maximizer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChunkSpec {
    pub i: u64,
    pub m: u64,
}

impl FromStr for ChunkSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (i, m) = s
            .split_once('/')
            .ok_or_else(|| format!("expected i/m, got {s:?}"))?;
        let i: u64 = i.trim().parse().map_err(|e| format!("chunk index: {e}"))?;
        let m: u64 = m.trim().parse().map_err(|e| format!("chunk count: {e}"))?;
        if m == 0 || i >= m {
            return Err(format!("need 0 <= i < m, got {i}/{m}"));
        }
        Ok(Self { i, m })
    }
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t > 0.0 && t <= 1e-3 {
        Ok(t)
    } else {
        Err(format!("tolerance must lie in (0, 1e-3], got {s}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
        {
            eprintln!("qratio: {e}");
            return ExitCode::from(error::EXIT_FAILURE);
        }
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match commands::run(&cli, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if !e.message.is_empty() {
                eprintln!("qratio: {e}");
            }
            e.exit_code()
        }
    }
}

/// Resolves `"-"` to stdin.
pub fn input_path(s: &str) -> Option<PathBuf> {
    (s != "-").then(|| PathBuf::from(s))
}

pub type CliResult<T> = Result<T, CliError>;
