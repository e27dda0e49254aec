//! Directed densest subgraph through weighted undirected lifts.

use crate::dsg::core::warn_small_tau;
use crate::error::{invalid, Result};
use crate::graph::{DirectedGraph, NodeWeightedGraph};
use crate::ledp::{LocalGraph, Parties, Payload, Randomizer, Runtime};
use crate::privacy::{Disjointness, PrivacyBudget};
use crate::weighted::{centralized_weighted_core_at, weighted_dsg_ledp, weighted_run_count};
use rand::Rng;

/// `α_t = min(1/(2t), t/2)`.
pub fn lift_alpha(t: f64) -> f64 {
    (0.5 / t).min(t / 2.0)
}

/// Rescaled side costs `(1/(2tα_t), t/(2α_t))`; the smaller one is exactly 1.
pub fn lift_side_costs(t: f64) -> (f64, f64) {
    if t <= 1.0 {
        (1.0 / (t * t), 1.0)
    } else {
        (1.0, t * t)
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(invalid("t", format!("{t} must be positive")));
    }
    Ok(())
}

/// Costs of the `2n` lifted vertices: left copies first, then right copies.
pub fn lift_costs(n: usize, t: f64) -> Result<Vec<f64>> {
    check_t(t)?;
    let (l, r) = lift_side_costs(t);
    Ok((0..2 * n).map(|v| if v < n { l } else { r }).collect())
}

/// Undirected weighted graph on `2n` vertices with an edge `(u_L, v_R)`
/// (`u_L = u`, `v_R = n + v`) for every arc `(u, v)`.
#[derive(Debug, Clone)]
pub struct BipartiteLift {
    t: f64,
    n: usize,
    lifted: NodeWeightedGraph,
}

/// Build the lift at scaling `t`.
pub fn lift(g: &DirectedGraph, t: f64) -> Result<BipartiteLift> {
    let costs = lift_costs(g.n(), t)?;
    let graph = LocalGraph::lift(g).expect("directed graphs have a lift");
    Ok(BipartiteLift {
        t,
        n: g.n(),
        lifted: NodeWeightedGraph::new(graph, costs)?,
    })
}

impl BipartiteLift {
    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn alpha(&self) -> f64 {
        lift_alpha(self.t)
    }

    /// Rescaled lift, all costs at least 1.
    pub fn lifted(&self) -> &NodeWeightedGraph {
        &self.lifted
    }

    pub fn left(&self, v: usize) -> usize {
        v
    }

    pub fn right(&self, v: usize) -> usize {
        self.n + v
    }

    /// `S^L ∪ T^R`, sorted.
    pub fn join(&self, s: &[usize], t: &[usize]) -> Vec<usize> {
        let mut u: Vec<usize> = s
            .iter()
            .map(|&v| self.left(v))
            .chain(t.iter().map(|&v| self.right(v)))
            .collect();
        u.sort_unstable();
        u
    }

    /// Split a lifted set into its sides.
    pub fn split(&self, set: &[usize]) -> (Vec<usize>, Vec<usize>) {
        split_sides(self.n, set)
    }

    /// Density with the unrescaled costs `1/(2t)` and `t/2`.
    pub fn unscaled_density(&self, set: &[usize]) -> Result<f64> {
        let e = self.lifted.graph().induced_edges(set)?;
        let (s, t) = self.split(set);
        Ok(e as f64 / (s.len() as f64 / (2.0 * self.t) + t.len() as f64 * self.t / 2.0))
    }

    /// Density with the rescaled costs.
    pub fn scaled_density(&self, set: &[usize]) -> Result<f64> {
        self.lifted.weighted_density(set)
    }
}

fn split_sides(n: usize, set: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let s = set.iter().copied().filter(|&v| v < n).collect();
    let t = set
        .iter()
        .copied()
        .filter(|&v| v >= n)
        .map(|v| v - n)
        .collect();
    (s, t)
}

/// `t_i = (1+β)^i / sqrt(n)` for `i = 0..=⌈log_{1+β} n⌉`.
pub fn t_grid(n: usize, beta: f64) -> Result<Vec<f64>> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(invalid("beta", format!("{beta} must be positive")));
    }
    if n == 0 {
        return Err(invalid("n", "empty graph"));
    }
    let top = ((n as f64).ln() / (1.0 + beta).ln()).ceil() as usize;
    let t0 = 1.0 / (n as f64).sqrt();
    Ok((0..=top)
        .map(|i| t0 * (1.0 + beta).powi(i as i32))
        .collect())
}

/// `M` with total spend `M/ς²`: the weighted runs `K_i` on each lift plus
/// one half-unit cross-degree release per grid point.
pub fn directed_spend(n: usize, c: f64, beta: f64) -> Result<f64> {
    let grid = t_grid(n, beta)?;
    Ok(grid
        .iter()
        .map(|&t| {
            let (l, r) = lift_side_costs(t);
            weighted_run_count(2 * n, c, beta, l.max(r)) as f64 + 0.5
        })
        .sum())
}

/// Result of the directed algorithms. Empty sides and `-∞` mean every
/// candidate had an empty side.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedResult {
    pub sources: Vec<usize>,
    pub targets: Vec<usize>,
    pub noisy_density: f64,
    pub budget: PrivacyBudget,
    pub rounds: usize,
}

impl DirectedResult {
    pub fn true_density(&self, g: &DirectedGraph) -> Result<f64> {
        if self.sources.is_empty() || self.targets.is_empty() {
            return Ok(0.0);
        }
        Ok(g.directed_density(&self.sources, &self.targets)?.value())
    }
}

/// `Σ_{v∈S} (deg_T(v) + N(0, ς²)) / sqrt(|S||T|)`, or `-∞` on an empty side.
/// Every node answers (those outside `S` report 0) so the charge of
/// `1/(2ς²)` zCDP does not depend on the sets.
pub fn noisy_directed_density(
    rt: &mut Runtime<'_>,
    s: &[usize],
    t: &[usize],
    varsigma: f64,
) -> Result<f64> {
    rt.publish("sources", Payload::Set(s.to_vec()))?;
    rt.publish("targets", Payload::Set(t.to_vec()))?;
    let r = Randomizer::gaussian("cross-degree", varsigma, Disjointness::Strict);
    let d = rt.collect(Parties::All, &r, |v| {
        let board = v.board();
        let sources = board.set("sources").expect("published above");
        if sources.binary_search(&v.id()).is_ok() {
            v.degree_into(board.set("targets").expect("published above")) as f64
        } else {
            0.0
        }
    })?;
    if s.is_empty() || t.is_empty() {
        return Ok(f64::NEG_INFINITY);
    }
    let total: f64 = s.iter().map(|&v| d[v]).sum();
    Ok(total / ((s.len() * t.len()) as f64).sqrt())
}

/// For each `t` on the grid, run the weighted algorithm on the lift, split
/// its set into sides and score the pair by noisy directed density.
/// Costs `M/ς²` with `M` from [`directed_spend`].
pub fn directed_dsg_ledp(
    rt: &mut Runtime<'_>,
    rounds: usize,
    varsigma: f64,
    c: f64,
    beta: f64,
) -> Result<DirectedResult> {
    let n = rt.n();
    let grid = t_grid(n, beta)?;
    warn_small_tau(n, rounds, varsigma);
    let (mark, start) = (rt.ledger().len(), rt.round());
    let sets = rt.run_children("t-grid", grid.len(), true, |i, child| {
        let costs = lift_costs(n, grid[i])?;
        weighted_dsg_ledp(child, &costs, rounds, varsigma, c, beta).map(|r| r.set)
    })?;
    let mut best = (Vec::new(), Vec::new(), f64::NEG_INFINITY);
    for set in &sets {
        let (s, t) = split_sides(n, set);
        let score = noisy_directed_density(rt, &s, &t, varsigma)?;
        if score > best.2 {
            best = (s, t, score);
        }
    }
    finish(rt, best, mark, start)
}

fn finish(
    rt: &mut Runtime<'_>,
    best: (Vec<usize>, Vec<usize>, f64),
    mark: usize,
    start: usize,
) -> Result<DirectedResult> {
    if best.2 == f64::NEG_INFINITY {
        log::warn!("every candidate had an empty side");
    }
    rt.publish("best-sources", Payload::Set(best.0.clone()))?;
    rt.publish("best-targets", Payload::Set(best.1.clone()))?;
    Ok(DirectedResult {
        sources: best.0,
        targets: best.1,
        noisy_density: best.2,
        budget: rt.ledger().total_since(mark),
        rounds: rt.round() - start,
    })
}

/// Guess count `N = ⌈2n² / L⌉` and spacing `L` of the centralized grid.
pub fn centralized_directed_grid(n: usize, rounds: usize, tau: f64) -> (usize, f64) {
    let spacing = crate::weighted::arithmetic_spacing(n, rounds, tau);
    (((2 * n * n) as f64 / spacing).ceil() as usize, spacing)
}

/// Random `t = sqrt(s'/t')` with `s', t'` uniform on `1..=n`, random
/// arithmetic guess, one weighted core on the lift, then a noisy density.
/// Costs `3/(2ς²)` zCDP.
pub fn centralized_directed_core(
    rt: &mut Runtime<'_>,
    rounds: usize,
    varsigma: f64,
) -> Result<DirectedResult> {
    let n = rt.n();
    let tau = (rounds as f64).sqrt() * varsigma;
    let (count, spacing) = centralized_directed_grid(n, rounds, tau);
    if !(spacing > 0.0) {
        return Err(invalid("n", "need at least 2 vertices"));
    }
    let mut rng = rt.curator_stream("guess");
    let s = rng.random_range(1..=n);
    let t = rng.random_range(1..=n);
    let k = rng.random_range(1..=count);
    centralized_directed_core_at(
        rt,
        rounds,
        varsigma,
        (s as f64 / t as f64).sqrt(),
        k as f64 * spacing,
    )
}

/// [`centralized_directed_core`] with `t` and the density guess fixed.
pub fn centralized_directed_core_at(
    rt: &mut Runtime<'_>,
    rounds: usize,
    varsigma: f64,
    t: f64,
    lambda: f64,
) -> Result<DirectedResult> {
    let n = rt.n();
    let costs = lift_costs(n, t)?;
    let (mark, start) = (rt.ledger().len(), rt.round());
    rt.publish("t", Payload::Scalar(t))?;
    let set = rt
        .run_children("lift", 1, true, |_, child| {
            centralized_weighted_core_at(child, &costs, rounds, varsigma, lambda).map(|r| r.set)
        })?
        .pop()
        .expect("one child");
    let (s, tt) = split_sides(n, &set);
    let score = noisy_directed_density(rt, &s, &tt, varsigma)?;
    finish(rt, (s, tt, score), mark, start)
}
