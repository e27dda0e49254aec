use super::{DirectedGraph, Graph};
use crate::error::{invalid, Result};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A graph with a planted dense block.
#[derive(Debug, Clone)]
pub struct PlantedGraph {
    pub graph: Graph,
    /// Vertices of the planted block, ascending.
    pub block: Vec<usize>,
}

/// A digraph with planted source and target blocks.
#[derive(Debug, Clone)]
pub struct PlantedDirected {
    pub graph: DirectedGraph,
    pub sources: Vec<usize>,
    pub targets: Vec<usize>,
}

fn check_prob(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid(name, format!("{p} is not a probability")))
    }
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_prob("p", p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges)
}

/// `G(n, p_out)` background with a random `k`-vertex block wired at `p_in`.
pub fn planted_dense(n: usize, k: usize, p_in: f64, p_out: f64, seed: u64) -> Result<PlantedGraph> {
    check_prob("p_in", p_in)?;
    check_prob("p_out", p_out)?;
    if k > n {
        return Err(invalid(
            "k",
            format!("block of {k} vertices in a graph on {n}"),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut block = sample(&mut rng, n, k).into_vec();
    block.sort_unstable();
    let mut inside = vec![false; n];
    block.iter().for_each(|&v| inside[v] = true);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if inside[u] && inside[v] { p_in } else { p_out };
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Ok(PlantedGraph {
        graph: Graph::new(n, &edges)?,
        block,
    })
}

/// Background arcs at `p_out`; arcs from a random `s`-block to a disjoint
/// random `t`-block at `p_in`.
pub fn planted_directed(
    n: usize,
    s: usize,
    t: usize,
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> Result<PlantedDirected> {
    check_prob("p_in", p_in)?;
    check_prob("p_out", p_out)?;
    if s + t > n {
        return Err(invalid(
            "s",
            format!("blocks of {s} and {t} vertices in a graph on {n}"),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = sample(&mut rng, n, s + t).into_vec();
    let mut sources = picked[..s].to_vec();
    let mut targets = picked[s..].to_vec();
    sources.sort_unstable();
    targets.sort_unstable();
    let mut side = vec![0u8; n];
    sources.iter().for_each(|&v| side[v] = 1);
    targets.iter().for_each(|&v| side[v] = 2);
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let p = if side[u] == 1 && side[v] == 2 {
                p_in
            } else {
                p_out
            };
            if rng.random_bool(p) {
                arcs.push((u, v));
            }
        }
    }
    Ok(PlantedDirected {
        graph: DirectedGraph::new(n, &arcs)?,
        sources,
        targets,
    })
}

/// Costs drawn uniformly from `[lo, hi]`, `1 <= lo <= hi`.
pub fn uniform_costs(n: usize, lo: f64, hi: f64, seed: u64) -> Result<Vec<f64>> {
    if !(lo >= 1.0 && hi >= lo && hi.is_finite()) {
        return Err(invalid(
            "costs",
            format!("range [{lo}, {hi}] must satisfy 1 <= lo <= hi"),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n)
        .map(|_| {
            if hi > lo {
                rng.random_range(lo..=hi)
            } else {
                lo
            }
        })
        .collect())
}
