//! Aggregate result rows by algorithm and check them against the additive
//! error bounds with a fixed constant.

use crate::args::SummarizeArgs;
use crate::error::{CliError, CliResult};
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::{Read, Write};

/// The fields of a result row that the summary needs.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub algo: String,
    pub n: usize,
    pub eps: f64,
    pub delta: f64,
    pub noisy_density: f64,
    pub true_density: Option<f64>,
    pub lambda_star: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub algo: String,
    pub rows: usize,
    pub noisy_mean: f64,
    pub noisy_median: f64,
    pub gap_mean: Option<f64>,
    pub gap_median: Option<f64>,
    pub gap_q10: Option<f64>,
    pub gap_q90: Option<f64>,
    pub bound_rule: &'static str,
    pub successes: Option<usize>,
    pub success_rate: Option<f64>,
    pub verdict: &'static str,
}

fn parse_opt(s: &str) -> CliResult<Option<f64>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| CliError::Input(format!("not a number: `{s}`")))
}

pub fn read_rows<R: Read>(r: R) -> CliResult<Vec<ResultRow>> {
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
    let headers = rd.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let need =
        |name: &str| col(name).ok_or_else(|| CliError::Input(format!("missing column {name}")));
    let (algo, n, eps, delta, noisy) = (
        need("algo")?,
        need("n")?,
        need("eps")?,
        need("delta")?,
        need("noisy_density")?,
    );
    let (truth, lambda) = (col("true_density"), col("lambda_star"));
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let get = |i: usize| rec.get(i).unwrap_or("");
        let num = |i: usize| -> CliResult<f64> {
            parse_opt(get(i))?
                .ok_or_else(|| CliError::Input(format!("empty field in column {}", &headers[i])))
        };
        rows.push(ResultRow {
            algo: get(algo).to_string(),
            n: get(n)
                .parse()
                .map_err(|_| CliError::Input(format!("bad n `{}`", get(n))))?,
            eps: num(eps)?,
            delta: num(delta)?,
            noisy_density: num(noisy)?,
            true_density: truth.map(|i| parse_opt(get(i))).transpose()?.flatten(),
            lambda_star: lambda.map(|i| parse_opt(get(i))).transpose()?.flatten(),
        });
    }
    Ok(rows)
}

/// Additive error allowed for `row` and the rule used, `C` times the
/// algorithm's error term.
pub fn bound(row: &ResultRow, constant: f64) -> (f64, &'static str) {
    let (n, eps, delta) = (row.n.max(2) as f64, row.eps, row.delta);
    match row.algo.as_str() {
        "centralized" => (
            constant * (n.ln() * (n / delta).ln()).sqrt() / eps,
            "C*sqrt(ln n * ln(n/delta))/eps",
        ),
        "value" => (constant * (n.ln() / eps).sqrt(), "C*sqrt(ln n/eps)"),
        "oracle" => (0.0, "exact"),
        _ => (
            constant * n.ln() * (1.0 / delta).ln().sqrt() / eps,
            "C*ln n*sqrt(ln(1/delta))/eps",
        ),
    }
}

/// Distance from the reference for one row. Value releases are compared
/// two-sided on the released number; set-returning algorithms one-sided on
/// the exact density of their set.
fn gap(row: &ResultRow, reference: Option<f64>) -> Option<f64> {
    let r = reference.or(row.lambda_star)?;
    match row.algo.as_str() {
        "value" => Some((row.noisy_density - r).abs()),
        "oracle" => Some(r - row.noisy_density),
        _ => row.true_density.map(|d| r - d),
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

fn sorted(mut xs: Vec<f64>) -> Vec<f64> {
    xs.sort_by(f64::total_cmp);
    xs
}

pub fn summarize(rows: &[ResultRow], args: &SummarizeArgs) -> CliResult<Vec<GroupSummary>> {
    if rows.is_empty() {
        return Err(CliError::Input("no result rows to summarize".into()));
    }
    let mut groups: BTreeMap<&str, Vec<&ResultRow>> = BTreeMap::new();
    for r in rows {
        groups.entry(&r.algo).or_default().push(r);
    }
    let mut out = Vec::new();
    for (algo, rs) in groups {
        let noisy = sorted(rs.iter().map(|r| r.noisy_density).collect());
        let gaps: Vec<Option<f64>> = rs.iter().map(|r| gap(r, args.reference)).collect();
        let rule = bound(rs[0], args.constant).1;
        let (stats, successes) = if gaps.iter().all(Option::is_some) {
            let g: Vec<f64> = gaps.iter().map(|x| x.unwrap()).collect();
            let ok = rs
                .iter()
                .zip(&g)
                .filter(|(r, g)| **g <= bound(r, args.constant).0 + 1e-12)
                .count();
            (Some(sorted(g)), Some(ok))
        } else {
            (None, None)
        };
        let rate = successes.map(|k| k as f64 / rs.len() as f64);
        out.push(GroupSummary {
            algo: algo.to_string(),
            rows: rs.len(),
            noisy_mean: mean(&noisy),
            noisy_median: quantile(&noisy, 0.5),
            gap_mean: stats.as_ref().map(|g| mean(g)),
            gap_median: stats.as_ref().map(|g| quantile(g, 0.5)),
            gap_q10: stats.as_ref().map(|g| quantile(g, 0.1)),
            gap_q90: stats.as_ref().map(|g| quantile(g, 0.9)),
            bound_rule: rule,
            successes,
            success_rate: rate,
            verdict: match rate {
                Some(r) if r >= args.required => "PASS",
                Some(_) => "FAIL",
                None => "n/a",
            },
        });
    }
    Ok(out)
}

pub fn write_summary<W: Write>(w: W, groups: &[GroupSummary]) -> CliResult<()> {
    let mut out = csv::Writer::from_writer(w);
    for g in groups {
        out.serialize(g)?;
    }
    out.flush()?;
    Ok(())
}

pub fn run(args: &SummarizeArgs) -> CliResult<()> {
    let file = std::fs::File::open(&args.input)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.input.display())))?;
    let groups = summarize(&read_rows(file)?, args)?;
    for g in &groups {
        match (g.successes, g.success_rate) {
            (Some(k), Some(r)) => eprintln!(
                "{} {}: {k}/{} within {} ({:.1}%)",
                g.verdict,
                g.algo,
                g.rows,
                g.bound_rule,
                100.0 * r
            ),
            _ => eprintln!(
                "n/a {}: no reference density, rerun with --reveal-truth or pass --reference",
                g.algo
            ),
        }
    }
    match &args.out {
        Some(p) => write_summary(std::fs::File::create(p)?, &groups),
        None => write_summary(std::io::stdout().lock(), &groups),
    }
}
