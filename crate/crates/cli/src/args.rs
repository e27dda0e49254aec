use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "dsg",
    version,
    about = "Private densest-subgraph experiments",
    args_conflicts_with_subcommands = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    #[command(flatten)]
    pub run: RunArgs,
    /// Log level filter (error, warn, info, debug, trace).
    #[arg(long, global = true, default_value = "warn")]
    pub log: String,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Run an algorithm (same flags as the bare command).
    Run(RunArgs),
    /// Write a synthetic graph as an edge list.
    Gen(GenArgs),
    /// Aggregate a results CSV by algorithm.
    Summarize(SummarizeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Ledp,
    Centralized,
    Weighted,
    Directed,
    Pure,
    Value,
    Oracle,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Ledp => "ledp",
            Algo::Centralized => "centralized",
            Algo::Weighted => "weighted",
            Algo::Directed => "directed",
            Algo::Pure => "pure",
            Algo::Value => "value",
            Algo::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Whp,
    Expectation,
}

/// Flags for a run. Everything is optional here so that a config file can
/// fill the gaps; see [`crate::config::Settings::resolve`].
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub algo: Option<Algo>,
    /// Edge-list file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Repetition constant: ⌈c·log₂ n⌉ runs, or γ = n^-c under selection.
    #[arg(long)]
    pub c: Option<f64>,
    /// Grid ratio for the weighted and directed searches.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Peeling slack for the pure algorithm.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Selection parameter for the centralized algorithm (default 1/n).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Override the number of MWU rounds.
    #[arg(long = "T")]
    pub rounds: Option<usize>,
    /// Override the noise scale.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Run without noise. Results are not private.
    #[arg(long)]
    pub zero_noise: bool,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Results file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Add exact densities to the output (non-private).
    #[arg(long)]
    pub reveal_truth: bool,
    /// Write the protocol transcript as JSON lines.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
    /// Write the privacy ledger as JSON.
    #[arg(long)]
    pub ledger: Option<PathBuf>,
    /// Clamp level for `--algo value`.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// `key=value` file with defaults for any of the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// JSON file caching exact optima by graph hash.
    #[arg(long)]
    pub oracle_cache: Option<PathBuf>,
    /// Run trials one after another instead of on the thread pool.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(subcommand)]
    pub kind: GenKind,
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// G(n, p_out) with a random k-vertex block at p_in.
    Planted {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.85)]
        pin: f64,
        #[arg(long, default_value_t = 0.01)]
        pout: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Erdős–Rényi G(n, p).
    Gnp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// G(n, p) with vertex costs uniform on [lo, hi].
    Weighted {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        lo: f64,
        #[arg(long, default_value_t = 4.0)]
        hi: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Digraph with arcs from an s-block to a t-block at p_in.
    Directed {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0.85)]
        pin: f64,
        #[arg(long, default_value_t = 0.01)]
        pout: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SummarizeArgs {
    /// Results CSV written by a run.
    pub input: PathBuf,
    /// Known reference density (for example a planted block's density).
    /// Defaults to each row's exact optimum when present.
    #[arg(long)]
    pub reference: Option<f64>,
    /// Constant in front of the additive error bound.
    #[arg(long = "C", default_value_t = 10.0)]
    pub constant: f64,
    /// Fraction of rows that must meet the bound for a PASS.
    #[arg(long, default_value_t = 0.9)]
    pub required: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
