//! Run settings: flags win over the config file, which wins over defaults.

use crate::args::{Algo, Format, Mode, RunArgs};
use crate::error::{CliError, CliResult};
use clap::ValueEnum;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

const KEYS: &[&str] = &[
    "algo",
    "input",
    "eps",
    "delta",
    "c",
    "beta",
    "eta",
    "gamma",
    "t",
    "sigma",
    "zero_noise",
    "trials",
    "seed",
    "out",
    "format",
    "reveal_truth",
    "transcript",
    "ledger",
    "mode",
    "oracle_cache",
    "sequential",
];

/// Parse `key = value` lines. `#` starts a comment; keys are case- and
/// dash/underscore-insensitive.
pub fn parse_config(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Args(format!("config line {}: expected key=value", i + 1)))?;
        let key = k.trim().to_ascii_lowercase().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Args(format!(
                "config line {}: unknown key `{}`",
                i + 1,
                k.trim()
            )));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

/// Fully resolved run settings. Graph-dependent defaults (`T`, `ς`, `γ`)
/// stay `None` until the graph is known.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub algo: Algo,
    pub input: PathBuf,
    pub eps: f64,
    pub delta: f64,
    pub c: f64,
    pub beta: f64,
    pub eta: f64,
    pub gamma: Option<f64>,
    pub rounds: Option<usize>,
    pub sigma: Option<f64>,
    pub zero_noise: bool,
    pub trials: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub reveal_truth: bool,
    pub transcript: Option<PathBuf>,
    pub ledger: Option<PathBuf>,
    pub mode: Mode,
    pub oracle_cache: Option<PathBuf>,
    pub sequential: bool,
}

fn value<T: FromStr>(cfg: &BTreeMap<String, String>, key: &str) -> CliResult<Option<T>> {
    cfg.get(key)
        .map(|v| {
            v.parse()
                .map_err(|_| CliError::Args(format!("config: bad value `{v}` for `{key}`")))
        })
        .transpose()
}

fn choice<T: ValueEnum>(cfg: &BTreeMap<String, String>, key: &str) -> CliResult<Option<T>> {
    cfg.get(key)
        .map(|v| T::from_str(v, true).map_err(|e| CliError::Args(format!("config: {key}: {e}"))))
        .transpose()
}

fn path(cfg: &BTreeMap<String, String>, key: &str) -> Option<PathBuf> {
    cfg.get(key).map(PathBuf::from)
}

impl Settings {
    pub fn load(args: &RunArgs) -> CliResult<Self> {
        let cfg = match &args.config {
            Some(p) => parse_config(&read(p)?)?,
            None => BTreeMap::new(),
        };
        Self::resolve(args, &cfg)
    }

    pub fn resolve(args: &RunArgs, cfg: &BTreeMap<String, String>) -> CliResult<Self> {
        let algo = args
            .algo
            .or(choice(cfg, "algo")?)
            .ok_or_else(|| CliError::Args("missing --algo".into()))?;
        let input = args
            .input
            .clone()
            .or(path(cfg, "input"))
            .ok_or_else(|| CliError::Args("missing --input".into()))?;
        let s = Settings {
            algo,
            input,
            eps: args.eps.or(value(cfg, "eps")?).unwrap_or(1.0),
            delta: args.delta.or(value(cfg, "delta")?).unwrap_or(1e-6),
            c: args.c.or(value(cfg, "c")?).unwrap_or(1.0),
            beta: args.beta.or(value(cfg, "beta")?).unwrap_or(0.1),
            eta: args.eta.or(value(cfg, "eta")?).unwrap_or(0.1),
            gamma: args.gamma.or(value(cfg, "gamma")?),
            rounds: args.rounds.or(value(cfg, "t")?),
            sigma: args.sigma.or(value(cfg, "sigma")?),
            zero_noise: args.zero_noise || value(cfg, "zero_noise")?.unwrap_or(false),
            trials: args.trials.or(value(cfg, "trials")?).unwrap_or(1),
            seed: args.seed.or(value(cfg, "seed")?).unwrap_or(0),
            out: args.out.clone().or(path(cfg, "out")),
            format: args
                .format
                .or(choice(cfg, "format")?)
                .unwrap_or(Format::Csv),
            reveal_truth: args.reveal_truth || value(cfg, "reveal_truth")?.unwrap_or(false),
            transcript: args.transcript.clone().or(path(cfg, "transcript")),
            ledger: args.ledger.clone().or(path(cfg, "ledger")),
            mode: args.mode.or(choice(cfg, "mode")?).unwrap_or(Mode::Whp),
            oracle_cache: args.oracle_cache.clone().or(path(cfg, "oracle_cache")),
            sequential: args.sequential || value(cfg, "sequential")?.unwrap_or(false),
        };
        s.check()?;
        Ok(s)
    }

    fn check(&self) -> CliResult<()> {
        let bad = |what: &str| Err(CliError::Args(what.to_string()));
        if self.trials == 0 {
            return bad("--trials must be at least 1");
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return bad("--c must be positive");
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return bad("--beta must be positive");
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return bad("--eta must be positive");
        }
        if let Some(g) = self.gamma {
            if !(g > 0.0 && g < 1.0) {
                return bad("--gamma must lie in (0, 1)");
            }
        }
        if self.rounds == Some(0) {
            return bad("--T must be at least 1");
        }
        if let Some(s) = self.sigma {
            if !(s > 0.0 && s.is_finite()) {
                return bad("--sigma must be positive; use --zero-noise for a noiseless run");
            }
        }
        Ok(())
    }

    /// Whether rows carry exact, non-private quantities.
    pub fn non_private(&self) -> bool {
        self.reveal_truth || self.algo == Algo::Oracle
    }
}

fn read(p: &Path) -> CliResult<String> {
    std::fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
}
