//! Node-weighted private densest subgraph, maximising `|E(S)|/c(S)` for
//! public costs `c_v >= 1`.

use crate::dsg::core::{
    argmax_by, check_rounds_tau, draw_round, noisy_peel_round, select_copies, warn_small_tau,
};
use crate::dsg::peeling::best_noisy_prefix;
use crate::dsg::{DensityResult, PeelOutcome};
use crate::error::{invalid, Result};
use crate::graph::{backward_degree, check_len, NodeWeightedGraph, Ordering};
use crate::hedge::{softmax_into, Hedge};
use crate::ledp::{Parties, Payload, Randomizer, Runtime};
use crate::privacy::{ledp_repetitions, Disjointness, PrivacyBudget};
use rand::Rng;

fn check_costs(n: usize, costs: &[f64]) -> Result<f64> {
    if costs.len() != n {
        return Err(invalid(
            "costs",
            format!("{} costs for {n} vertices", costs.len()),
        ));
    }
    if costs.iter().any(|c| !(c.is_finite() && *c >= 1.0)) {
        return Err(invalid("costs", "every cost must be finite and at least 1"));
    }
    Ok(costs.iter().copied().fold(1.0, f64::max))
}

/// Peeling with the weighted denominator `c(prefix)`. Costs `1/(2ς²)` zCDP.
pub fn weighted_peeling(
    rt: &mut Runtime<'_>,
    costs: &[f64],
    sigma: &Ordering,
    varsigma: f64,
) -> Result<PeelOutcome> {
    check_costs(rt.n(), costs)?;
    check_len(rt.n(), sigma)?;
    rt.publish("peel-order", Payload::Ordering(sigma.clone()))?;
    let r = Randomizer::gaussian("peel-count", varsigma, Disjointness::Strict);
    let q = rt.collect(Parties::All, &r, |v| {
        let pos = v
            .board()
            .ordering("peel-order")
            .expect("published above")
            .positions();
        backward_degree(v.neighbors(), pos, v.id()) as f64
    })?;
    let outcome = best_noisy_prefix(sigma.order(), |v| q[v], |v| costs[v]);
    rt.publish("peel-set", Payload::Set(outcome.set.clone()))?;
    rt.publish("peel-density", Payload::Scalar(outcome.noisy_density))?;
    Ok(outcome)
}

/// Output of [`weighted_nop_mwu`].
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMwuOutput {
    /// `x_v = p_v / c_v` at the chosen round.
    pub x: Vec<f64>,
    pub ordering: Ordering,
    pub chosen_round: usize,
}

/// Rounds of the weighted MWU: order by nonincreasing `p_v/c_v` (ties by
/// id), collect noisy peel counts, apply losses `(1/width)(1 − q̂_v/(c_v λ))`
/// with `width = (n + τ)/λ`. `visit(t, x_t, σ_t)` sees each round first.
pub fn weighted_nop_mwu_trajectory<V>(
    rt: &mut Runtime<'_>,
    costs: &[f64],
    lambda: f64,
    rounds: usize,
    tau: f64,
    mut visit: V,
) -> Result<()>
where
    V: FnMut(usize, &dyn Fn() -> Vec<f64>, &Ordering),
{
    check_costs(rt.n(), costs)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(invalid("lambda", format!("{lambda} must be positive")));
    }
    check_rounds_tau(rounds, tau)?;
    let n = rt.n();
    let width = (n as f64 + tau) / lambda;
    let log_costs: Vec<f64> = costs.iter().map(|c| c.ln()).collect();
    let mut hedge = Hedge::new(n, rounds)?;
    let mut scores = vec![0.0; n];
    let mut losses = vec![0.0; n];
    for t in 0..rounds {
        for ((s, w), lc) in scores.iter_mut().zip(hedge.log_weights()).zip(&log_costs) {
            *s = w - lc;
        }
        let sigma = Ordering::by_scores_desc(&scores);
        let x = || {
            let mut p = vec![0.0; n];
            softmax_into(hedge.log_weights(), &mut p);
            p.iter().zip(costs).map(|(p, c)| p / c).collect()
        };
        visit(t, &x, &sigma);
        let q = noisy_peel_round(rt, sigma, tau)?;
        for ((m, qv), c) in losses.iter_mut().zip(&q).zip(costs) {
            *m = (1.0 - qv / (c * lambda)) / width;
        }
        hedge.update(&losses)?;
    }
    Ok(())
}

/// Weighted MWU at guess `λ`, returning a uniformly random round's `x` and
/// ordering. Costs `T/(2τ²)` zCDP.
pub fn weighted_nop_mwu(
    rt: &mut Runtime<'_>,
    costs: &[f64],
    lambda: f64,
    rounds: usize,
    tau: f64,
) -> Result<WeightedMwuOutput> {
    check_rounds_tau(rounds, tau)?;
    let chosen = draw_round(rt, rounds);
    let mut kept = None;
    weighted_nop_mwu_trajectory(rt, costs, lambda, rounds, tau, |t, x, sigma| {
        if t == chosen {
            kept = Some((x(), sigma.clone()));
        }
    })?;
    rt.publish("chosen-round", Payload::Index(chosen))?;
    let (x, ordering) = kept.expect("chosen round is in range");
    Ok(WeightedMwuOutput {
        x,
        ordering,
        chosen_round: chosen,
    })
}

/// Primal feasibility data for a candidate `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityMargin {
    /// `Σ c_v x_v`.
    pub budget_sum: f64,
    /// `min_σ ⟨x, q(σ)⟩`.
    pub min_cover: f64,
}

impl FeasibilityMargin {
    /// Feasible for the packing LP at level `λ`.
    pub fn is_feasible(&self, lambda: f64) -> bool {
        (self.budget_sum - 1.0).abs() <= 1e-9 && self.min_cover >= lambda
    }
}

/// Evaluate `x` against the primal LP. The minimum over orderings is
/// attained by sorting `x` in nonincreasing order.
pub fn plp_feasibility_margin(g: &NodeWeightedGraph, x: &[f64]) -> Result<FeasibilityMargin> {
    if x.len() != g.n() {
        return Err(invalid(
            "x",
            format!("{} entries for {} vertices", x.len(), g.n()),
        ));
    }
    if x.iter().any(|v| !(*v >= 0.0)) {
        return Err(invalid("x", "entries must be nonnegative"));
    }
    let sigma = Ordering::by_scores_desc(x);
    let min_cover = (0..g.n())
        .map(|v| x[v] * backward_degree(g.graph().neighbors(v), sigma.positions(), v) as f64)
        .sum();
    let budget_sum = x.iter().zip(g.costs()).map(|(a, c)| a * c).sum();
    Ok(FeasibilityMargin {
        budget_sum,
        min_cover,
    })
}

/// Density guesses for the weighted search.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaGrid {
    points: Vec<f64>,
}

impl LambdaGrid {
    /// `λ_i = (1+β)^i / (2 C_max)` for `i < ⌈log_{1+β}(2 C_max n)⌉ + 1`.
    pub fn geometric(c_max: f64, n: usize, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(invalid("beta", format!("{beta} must be positive")));
        }
        if !(c_max >= 1.0 && c_max.is_finite()) {
            return Err(invalid("c_max", format!("{c_max} must be at least 1")));
        }
        let count = geometric_count(c_max, n, beta);
        let lambda0 = 1.0 / (2.0 * c_max);
        Ok(LambdaGrid {
            points: (0..count)
                .map(|i| lambda0 * (1.0 + beta).powi(i as i32))
                .collect(),
        })
    }

    /// `λ_k = k·L` for `k = 1..=N`, `L = 4(n+τ) sqrt(ln n / T)`, `N = ⌈2 C_max n / L⌉`.
    pub fn arithmetic(c_max: f64, n: usize, rounds: usize, tau: f64) -> Result<Self> {
        let spacing = arithmetic_spacing(n, rounds, tau);
        if !(spacing > 0.0) {
            return Err(invalid("n", "the arithmetic grid needs n >= 2"));
        }
        let count = (2.0 * c_max * n as f64 / spacing).ceil() as usize;
        Ok(LambdaGrid {
            points: (1..=count).map(|k| k as f64 * spacing).collect(),
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn geometric_count(c_max: f64, n: usize, beta: f64) -> usize {
    ((2.0 * c_max * n as f64).ln() / (1.0 + beta).ln()).ceil() as usize + 1
}

/// `4(n+τ) sqrt(ln n / T)`.
pub fn arithmetic_spacing(n: usize, rounds: usize, tau: f64) -> f64 {
    4.0 * (n as f64 + tau) * ((n as f64).ln() / rounds as f64).sqrt()
}

/// `K`: number of weighted core runs, `⌈c·log₂ n⌉ · |grid|`.
pub fn weighted_run_count(n: usize, c: f64, beta: f64, c_max: f64) -> usize {
    ledp_repetitions(n, c) * geometric_count(c_max, n, beta)
}

/// Geometric grid search: for each guess, `⌈c·log₂ n⌉` runs of weighted MWU
/// plus weighted peeling; returns the best by noisy density. Costs `K/ς²`.
pub fn weighted_dsg_ledp(
    rt: &mut Runtime<'_>,
    costs: &[f64],
    rounds: usize,
    varsigma: f64,
    c: f64,
    beta: f64,
) -> Result<DensityResult> {
    let c_max = check_costs(rt.n(), costs)?;
    if !(c > 0.0) {
        return Err(invalid("c", format!("{c} must be positive")));
    }
    warn_small_tau(rt.n(), rounds, varsigma);
    let grid = LambdaGrid::geometric(c_max, rt.n(), beta)?;
    let reps = ledp_repetitions(rt.n(), c);
    let tau = (rounds as f64).sqrt() * varsigma;
    let (mark, start) = (rt.ledger().len(), rt.round());
    let outs = rt.run_children("grid", reps * grid.len(), false, |k, child| {
        let lambda = grid.points()[k / reps];
        let mwu = weighted_nop_mwu(child, costs, lambda, rounds, tau)?;
        weighted_peeling(child, costs, &mwu.ordering, varsigma)
    })?;
    let best = argmax_by(&outs, |o| o.noisy_density);
    rt.publish("selected", Payload::Index(best))?;
    Ok(DensityResult {
        set: outs[best].set.clone(),
        noisy_density: outs[best].noisy_density,
        budget: rt.ledger().total_since(mark),
        rounds: rt.round() - start,
        selection: None,
    })
}

/// One uniformly random guess from the arithmetic grid, one weighted MWU
/// run and one weighted peeling. Costs `1/ς²` zCDP.
pub fn centralized_weighted_core(
    rt: &mut Runtime<'_>,
    costs: &[f64],
    rounds: usize,
    varsigma: f64,
) -> Result<DensityResult> {
    let c_max = check_costs(rt.n(), costs)?;
    let tau = (rounds as f64).sqrt() * varsigma;
    let grid = LambdaGrid::arithmetic(c_max, rt.n(), rounds, tau)?;
    let k = rt
        .curator_stream("lambda-index")
        .random_range(0..grid.len());
    centralized_weighted_core_at(rt, costs, rounds, varsigma, grid.points()[k])
}

/// [`centralized_weighted_core`] with the guess fixed to `lambda`.
pub fn centralized_weighted_core_at(
    rt: &mut Runtime<'_>,
    costs: &[f64],
    rounds: usize,
    varsigma: f64,
    lambda: f64,
) -> Result<DensityResult> {
    warn_small_tau(rt.n(), rounds, varsigma);
    let tau = (rounds as f64).sqrt() * varsigma;
    let (mark, start) = (rt.ledger().len(), rt.round());
    rt.publish("lambda", Payload::Scalar(lambda))?;
    let mwu = weighted_nop_mwu(rt, costs, lambda, rounds, tau)?;
    let out = weighted_peeling(rt, costs, &mwu.ordering, varsigma)?;
    Ok(DensityResult {
        set: out.set,
        noisy_density: out.noisy_density,
        budget: rt.ledger().total_since(mark),
        rounds: rt.round() - start,
        selection: None,
    })
}

/// [`centralized_weighted_core`] under private selection with parameter `γ`.
pub fn centralized_weighted_dsg(
    rt: &mut Runtime<'_>,
    costs: &[f64],
    rounds: usize,
    varsigma: f64,
    gamma: f64,
) -> Result<DensityResult> {
    let per_copy = PrivacyBudget::new(1.0 / (varsigma * varsigma))?;
    select_copies(rt, gamma, per_copy, |child| {
        centralized_weighted_core(child, costs, rounds, varsigma)
    })
}
