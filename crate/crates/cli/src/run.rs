//! Trial runner: resolve parameters once, run every trial on its own
//! substream, emit rows in trial order.

use crate::args::{Algo, Format, Mode};
use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::oracle::{InputGraph, OracleCache};
use dsg_core::density_value::{private_density_value, ValueMode};
use dsg_core::directed::{directed_dsg_ledp, directed_spend};
use dsg_core::dsg::{centralized_dsg, default_rounds, dsg_ledp, DensityResult, MAX_ROUNDS};
use dsg_core::graph::io::read_graph_file;
use dsg_core::ledp::{LocalGraph, RecordMode, Runtime};
use dsg_core::privacy::{
    pure_to_zcdp, sigma_for_target, zcdp_to_epsdelta, Accountant, SigmaVariant,
};
use dsg_core::pure_peel::{pure_eps_per_round, simple_pure_ledp};
use dsg_core::weighted::{weighted_dsg_ledp, weighted_run_count};
use dsg_core::{Execution, StreamKey};
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const NON_PRIVATE_HEADER: &str =
    "# NON-PRIVATE EVALUATION: true_density and lambda_star are exact and not privatized";

/// One result row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub algo: String,
    pub n: usize,
    pub m: usize,
    pub eps: f64,
    pub delta: f64,
    pub params: String,
    pub trial: usize,
    /// Raw value of the trial's stream key, `root(seed).derive(trial)`.
    pub trial_seed: u64,
    pub noisy_density: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub true_density: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_star: Option<f64>,
    pub set_size: usize,
    pub rounds: usize,
    pub wall_ms: f64,
    pub zcdp_total: Option<f64>,
    pub eps_at_delta: Option<f64>,
}

/// Parameters fixed for every trial of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub sigma: f64,
    pub rounds: usize,
    pub gamma: f64,
    pub eps_per_round: f64,
    pub params: String,
}

/// Zero-noise default `⌈10 n² ln n⌉`, capped like the private default.
fn zero_noise_rounds(n: usize) -> usize {
    let n = n.max(2) as f64;
    ((10.0 * n * n * n.ln()).ceil() as usize).min(MAX_ROUNDS)
}

fn check_eps(s: &Settings) -> CliResult<()> {
    if !(s.eps > 0.0 && s.eps.is_finite()) {
        return Err(CliError::Privacy(format!(
            "eps = {} must be positive and finite",
            s.eps
        )));
    }
    Ok(())
}

pub fn plan(s: &Settings, g: &InputGraph) -> CliResult<Plan> {
    let n = g.n();
    let mut plan = Plan {
        sigma: 0.0,
        rounds: 0,
        gamma: s.gamma.unwrap_or((n.max(2) as f64).powf(-s.c)),
        eps_per_round: f64::INFINITY,
        params: String::new(),
    };
    let variant = match (s.algo, g) {
        (Algo::Ledp, _) => Some(SigmaVariant::Ledp { c: s.c }),
        (Algo::Centralized, _) => Some(SigmaVariant::Centralized { c: s.c }),
        (Algo::Weighted, InputGraph::Weighted(w)) => Some(SigmaVariant::Weighted {
            k: weighted_run_count(n, s.c, s.beta, w.c_max()),
        }),
        (Algo::Directed, _) => Some(SigmaVariant::Directed {
            m: directed_spend(n, s.c, s.beta)?,
        }),
        _ => None,
    };
    if let Some(v) = variant {
        // Lifted runs see 2n vertices.
        let nodes = if s.algo == Algo::Directed { 2 * n } else { n };
        plan.sigma = if s.zero_noise {
            0.0
        } else {
            match s.sigma {
                Some(x) => x,
                None => sigma_for_target(s.eps, s.delta, n, v)?,
            }
        };
        plan.rounds = match s.rounds {
            Some(t) => t,
            None if s.zero_noise => zero_noise_rounds(nodes),
            None => default_rounds(nodes, plan.sigma),
        };
        plan.params = format!("c={};T={};sigma={}", s.c, plan.rounds, plan.sigma);
        match s.algo {
            Algo::Centralized => plan.params += &format!(";gamma={}", plan.gamma),
            Algo::Weighted | Algo::Directed => plan.params += &format!(";beta={}", s.beta),
            _ => {}
        }
    }
    match s.algo {
        Algo::Pure => {
            if !s.zero_noise {
                check_eps(s)?;
                plan.eps_per_round = pure_eps_per_round(n, s.eps, s.eta)?;
            }
            plan.params = format!("eta={};eps_round={}", s.eta, plan.eps_per_round);
        }
        Algo::Value => {
            if !s.zero_noise {
                check_eps(s)?;
            }
            let mode = match s.mode {
                Mode::Whp => "whp",
                Mode::Expectation => "expectation",
            };
            plan.params = format!("mode={mode}");
        }
        _ => {}
    }
    if s.zero_noise && s.algo != Algo::Oracle {
        plan.params += ";zero_noise";
    }
    Ok(plan)
}

pub fn load_graph(s: &Settings) -> CliResult<InputGraph> {
    let e = read_graph_file(&s.input)
        .map_err(|x| CliError::Input(format!("{}: {x}", s.input.display())))?;
    let g = match s.algo {
        Algo::Weighted => InputGraph::Weighted(e.to_weighted()?),
        Algo::Directed => InputGraph::Directed(e.to_directed()?),
        Algo::Oracle if e.costs.is_some() => InputGraph::Weighted(e.to_weighted()?),
        _ => InputGraph::Undirected(e.to_graph()?),
    };
    if g.n() == 0 {
        return Err(CliError::Input("graph has no vertices".into()));
    }
    Ok(g)
}

/// `out.jsonl` for a single trial, `out-3.jsonl` for trial 3 of several.
pub fn indexed_path(p: &Path, trial: usize, trials: usize) -> PathBuf {
    if trials == 1 {
        return p.to_path_buf();
    }
    let stem = p.file_stem().and_then(|x| x.to_str()).unwrap_or("out");
    let name = match p.extension().and_then(|x| x.to_str()) {
        Some(ext) => format!("{stem}-{trial}.{ext}"),
        None => format!("{stem}-{trial}"),
    };
    p.with_file_name(name)
}

struct Outcome {
    noisy: f64,
    true_density: f64,
    size: usize,
    rounds: usize,
    eps_at: Option<f64>,
    ledger: Option<Accountant>,
}

fn protocol<F>(
    s: &Settings,
    local: &dyn LocalGraph,
    key: StreamKey,
    trial: usize,
    f: F,
) -> CliResult<(Outcome, Accountant)>
where
    F: FnOnce(&mut Runtime<'_>) -> CliResult<Outcome>,
{
    let record = if s.transcript.is_some() {
        RecordMode::Full
    } else {
        RecordMode::LedgerOnly
    };
    let mut rt = Runtime::new(local, key)
        .with_record(record)
        .with_zero_noise(s.zero_noise);
    let out = f(&mut rt)?;
    let (transcript, ledger) = rt.finish();
    if let Some(p) = &s.transcript {
        let path = indexed_path(p, trial, s.trials);
        let file = std::fs::File::create(&path)?;
        transcript.write_jsonl(std::io::BufWriter::new(file))?;
    }
    Ok((out, ledger))
}

fn unweighted(r: &DensityResult, g: &dsg_core::graph::Graph) -> CliResult<(f64, usize)> {
    Ok((g.density(&r.set)?.value(), r.set.len()))
}

fn run_trial(
    s: &Settings,
    g: &InputGraph,
    plan: &Plan,
    lambda_star: Option<f64>,
    trial: usize,
) -> CliResult<Row> {
    let key = StreamKey::root(s.seed).derive(trial as u64);
    let start = Instant::now();
    let zcdp_eps = |l: &Accountant| -> CliResult<Option<f64>> {
        let total = l.total();
        Ok(if total.is_private() {
            Some(zcdp_to_epsdelta(total, s.delta)?)
        } else {
            None
        })
    };
    let out = match (s.algo, g) {
        (Algo::Oracle, _) => {
            let l = lambda_star.ok_or_else(|| {
                CliError::Input("graph is too large for an exact optimum of this kind".into())
            })?;
            Outcome {
                noisy: l,
                true_density: l,
                size: 0,
                rounds: 0,
                eps_at: None,
                ledger: None,
            }
        }
        (Algo::Value, InputGraph::Undirected(u)) => {
            let mode = match s.mode {
                Mode::Whp => ValueMode::Whp,
                Mode::Expectation => ValueMode::Expectation,
            };
            let eps = if s.zero_noise { f64::INFINITY } else { s.eps };
            let r = private_density_value(u, eps, mode, &mut key.stream())?;
            Outcome {
                noisy: r.value,
                true_density: r.clamp.rho_x,
                size: 0,
                rounds: 0,
                eps_at: eps.is_finite().then_some(eps),
                ledger: None,
            }
        }
        (Algo::Ledp | Algo::Centralized | Algo::Pure, InputGraph::Undirected(u)) => {
            let (mut out, ledger) = protocol(s, u, key, trial, |rt| {
                let r = match s.algo {
                    Algo::Ledp => dsg_ledp(rt, plan.rounds, plan.sigma, s.c)?,
                    Algo::Centralized => centralized_dsg(rt, plan.rounds, plan.sigma, plan.gamma)?,
                    _ => simple_pure_ledp(rt, plan.eps_per_round, s.eta)?.result,
                };
                let (d, size) = unweighted(&r, u)?;
                let eps_at = match s.algo {
                    _ if s.zero_noise => None,
                    Algo::Centralized => Some(r.eps_at(s.delta)?),
                    _ => None,
                };
                Ok(Outcome {
                    noisy: r.noisy_density,
                    true_density: d,
                    size,
                    rounds: r.rounds,
                    eps_at,
                    ledger: None,
                })
            })?;
            if out.eps_at.is_none() && !s.zero_noise {
                out.eps_at = match s.algo {
                    Algo::Pure => ledger.pure_eps_total(),
                    _ => zcdp_eps(&ledger)?,
                };
            }
            out.ledger = Some(ledger);
            out
        }
        (Algo::Weighted, InputGraph::Weighted(w)) => {
            let (mut out, ledger) = protocol(s, w.graph(), key, trial, |rt| {
                let r = weighted_dsg_ledp(rt, w.costs(), plan.rounds, plan.sigma, s.c, s.beta)?;
                Ok(Outcome {
                    noisy: r.noisy_density,
                    true_density: w.weighted_density(&r.set)?,
                    size: r.set.len(),
                    rounds: r.rounds,
                    eps_at: None,
                    ledger: None,
                })
            })?;
            out.eps_at = zcdp_eps(&ledger)?;
            out.ledger = Some(ledger);
            out
        }
        (Algo::Directed, InputGraph::Directed(d)) => {
            let (mut out, ledger) = protocol(s, d, key, trial, |rt| {
                let r = directed_dsg_ledp(rt, plan.rounds, plan.sigma, s.c, s.beta)?;
                Ok(Outcome {
                    noisy: r.noisy_density,
                    true_density: r.true_density(d)?,
                    size: r.sources.len() + r.targets.len(),
                    rounds: r.rounds,
                    eps_at: None,
                    ledger: None,
                })
            })?;
            out.eps_at = zcdp_eps(&ledger)?;
            out.ledger = Some(ledger);
            out
        }
        _ => {
            return Err(CliError::Internal(
                "graph kind does not match algorithm".into(),
            ))
        }
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let zcdp_total = match (&out.ledger, s.algo) {
        (Some(l), _) if l.total().is_private() => Some(l.total().zcdp()),
        (None, Algo::Value) => out.eps_at.map(pure_to_zcdp),
        _ => None,
    };
    if let (Some(p), Some(l)) = (&s.ledger, &out.ledger) {
        let json = l.to_json(s.delta)?;
        std::fs::write(
            indexed_path(p, trial, s.trials),
            serde_json::to_string_pretty(&json)?,
        )?;
    }
    let reveal = s.non_private();
    Ok(Row {
        algo: s.algo.name().to_string(),
        n: g.n(),
        m: g.m(),
        eps: s.eps,
        delta: s.delta,
        params: plan.params.clone(),
        trial,
        trial_seed: key.raw(),
        noisy_density: out.noisy,
        true_density: reveal.then_some(out.true_density),
        lambda_star: if reveal { lambda_star } else { None },
        set_size: out.size,
        rounds: out.rounds,
        wall_ms,
        zcdp_total,
        eps_at_delta: out.eps_at,
    })
}

/// Run every trial of `s` and return the rows in trial order.
pub fn run_trials(s: &Settings) -> CliResult<Vec<Row>> {
    let g = load_graph(s)?;
    let plan = plan(s, &g)?;
    log::info!(
        "{} on n={} m={} with {}",
        s.algo.name(),
        g.n(),
        g.m(),
        plan.params
    );
    let lambda_star = if s.non_private() {
        let mut cache = OracleCache::open(s.oracle_cache.as_deref())?;
        let opt = cache.get(&g)?;
        cache.save()?;
        opt.map(|o| o.lambda_star)
    } else {
        None
    };
    let trials = if s.algo == Algo::Oracle { 1 } else { s.trials };
    let exec = if s.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    exec.try_map(trials, |i| run_trial(s, &g, &plan, lambda_star, i))
}

const COLUMNS: &[&str] = &[
    "algo",
    "n",
    "m",
    "eps",
    "delta",
    "params",
    "trial",
    "trial_seed",
    "noisy_density",
    "true_density",
    "lambda_star",
    "set_size",
    "rounds",
    "wall_ms",
    "zcdp_total",
    "eps_at_delta",
];

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Write rows as CSV. The exact columns appear only for non-private runs,
/// behind a comment header saying so.
pub fn write_csv<W: Write>(mut w: W, rows: &[Row], non_private: bool) -> CliResult<()> {
    if non_private {
        writeln!(w, "{NON_PRIVATE_HEADER}")?;
    }
    let mut out = csv::Writer::from_writer(w);
    out.write_record(
        COLUMNS
            .iter()
            .filter(|c| non_private || (**c != "true_density" && **c != "lambda_star")),
    )?;
    for r in rows {
        let mut rec = vec![
            r.algo.clone(),
            r.n.to_string(),
            r.m.to_string(),
            r.eps.to_string(),
            r.delta.to_string(),
            r.params.clone(),
            r.trial.to_string(),
            r.trial_seed.to_string(),
            r.noisy_density.to_string(),
        ];
        if non_private {
            rec.push(opt(r.true_density));
            rec.push(opt(r.lambda_star));
        }
        rec.extend([
            r.set_size.to_string(),
            r.rounds.to_string(),
            format!("{:.3}", r.wall_ms),
            opt(r.zcdp_total),
            opt(r.eps_at_delta),
        ]);
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(mut w: W, rows: &[Row], non_private: bool) -> CliResult<()> {
    let doc = serde_json::json!({
        "non_private_evaluation": non_private,
        "rows": rows,
    });
    serde_json::to_writer_pretty(&mut w, &doc)?;
    writeln!(w)?;
    Ok(())
}

pub fn run(s: &Settings) -> CliResult<()> {
    let rows = run_trials(s)?;
    let np = s.non_private();
    let write = |w: &mut dyn Write| match s.format {
        Format::Csv => write_csv(w, &rows, np),
        Format::Json => write_json(w, &rows, np),
    };
    match &s.out {
        Some(p) => {
            let mut f = std::io::BufWriter::new(std::fs::File::create(p)?);
            write(&mut f)?;
            f.flush()?;
        }
        None => write(&mut std::io::stdout().lock())?,
    }
    Ok(())
}
