use super::peeling::peeling;
use super::select::draw_copies;
use super::{DensityResult, SelectionInfo};
use crate::error::{invalid, Result};
use crate::graph::{backward_degree, Ordering};
use crate::hedge::Hedge;
use crate::ledp::{Parties, Payload, Randomizer, Runtime};
use crate::privacy::{ledp_repetitions, Disjointness, PrivacyBudget};
use rand::Rng;

/// Hard cap on the number of MWU rounds.
pub const MAX_ROUNDS: usize = 10_000_000;

/// `⌈n²/ς²⌉`, at least 1 and capped at [`MAX_ROUNDS`] with a warning.
pub fn default_rounds(n: usize, varsigma: f64) -> usize {
    let t = (n as f64 * n as f64 / (varsigma * varsigma)).ceil();
    if !(t <= MAX_ROUNDS as f64) {
        log::warn!(
            "round count {t} exceeds the cap; using {MAX_ROUNDS}, utility guarantees are weakened"
        );
        return MAX_ROUNDS;
    }
    (t as usize).max(1)
}

/// Parameters of the noisy order-packing MWU.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MwuConfig {
    pub rounds: usize,
    pub tau: f64,
    pub lambda_star: f64,
    /// Loss width `(n + τ)/λ*`.
    pub width: f64,
    /// Loss noise `τ/(width·λ*)`.
    pub nu: f64,
    /// Approximation slack `8·width·sqrt(ln n / T)`.
    pub alpha_bound: f64,
}

impl MwuConfig {
    pub fn new(n: usize, lambda_star: f64, rounds: usize, tau: f64) -> Result<Self> {
        if !(lambda_star > 0.0 && lambda_star.is_finite()) {
            return Err(invalid(
                "lambda_star",
                format!("{lambda_star} must be positive"),
            ));
        }
        check_rounds_tau(rounds, tau)?;
        let width = (n as f64 + tau) / lambda_star;
        Ok(MwuConfig {
            rounds,
            tau,
            lambda_star,
            width,
            nu: tau / (width * lambda_star),
            alpha_bound: 8.0 * width * ((n as f64).ln() / rounds as f64).sqrt(),
        })
    }
}

pub(crate) fn check_rounds_tau(rounds: usize, tau: f64) -> Result<()> {
    if rounds == 0 {
        return Err(invalid("T", "need at least one round"));
    }
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(invalid(
            "tau",
            format!("{tau} must be nonnegative and finite"),
        ));
    }
    Ok(())
}

/// The chosen round, drawn up front from the curator stream and published
/// once the rounds are over.
pub(crate) fn draw_round(rt: &Runtime<'_>, rounds: usize) -> usize {
    rt.curator_stream("chosen-round").random_range(0..rounds)
}

/// One round: publish `sigma`, collect `q(σ)_v + N(0, τ²)` from everyone.
pub(crate) fn noisy_peel_round(
    rt: &mut Runtime<'_>,
    sigma: Ordering,
    tau: f64,
) -> Result<Vec<f64>> {
    rt.publish("order", Payload::Ordering(sigma))?;
    let r = Randomizer::gaussian("order-count", tau, Disjointness::Strict);
    rt.collect(Parties::All, &r, |v| {
        let pos = v
            .board()
            .ordering("order")
            .expect("published above")
            .positions();
        backward_degree(v.neighbors(), pos, v.id()) as f64
    })
}

/// Output of [`nop_mwu`].
#[derive(Debug, Clone, PartialEq)]
pub struct NopMwuOutput {
    pub distribution: Vec<f64>,
    pub ordering: Ordering,
    /// Zero-based index of the returned round.
    pub chosen_round: usize,
}

/// Hedge over vertices with losses `(1/width)(1 − q̂_v/λ*)`, ordering each
/// round by nonincreasing weight (compared in the log domain, ties by id).
/// Returns the state of a uniformly random round. Costs `T/(2τ²)` zCDP.
pub fn nop_mwu(
    rt: &mut Runtime<'_>,
    lambda_star: f64,
    rounds: usize,
    tau: f64,
) -> Result<NopMwuOutput> {
    let chosen = draw_round(rt, rounds);
    let mut kept = None;
    nop_mwu_trajectory(rt, lambda_star, rounds, tau, |t, hedge, sigma| {
        if t == chosen {
            kept = Some((hedge.distribution(), sigma.clone()));
        }
    })?;
    rt.publish("chosen-round", Payload::Index(chosen))?;
    let (distribution, ordering) = kept.expect("chosen round is in range");
    Ok(NopMwuOutput {
        distribution,
        ordering,
        chosen_round: chosen,
    })
}

/// The rounds of [`nop_mwu`] without the final draw; `visit(t, state, σ_t)`
/// sees every round before its losses are applied.
pub fn nop_mwu_trajectory<V>(
    rt: &mut Runtime<'_>,
    lambda_star: f64,
    rounds: usize,
    tau: f64,
    mut visit: V,
) -> Result<()>
where
    V: FnMut(usize, &Hedge, &Ordering),
{
    let cfg = MwuConfig::new(rt.n(), lambda_star, rounds, tau)?;
    let mut hedge = Hedge::new(rt.n(), rounds)?;
    let mut losses = vec![0.0; rt.n()];
    for t in 0..rounds {
        let sigma = Ordering::by_scores_desc(hedge.log_weights());
        visit(t, &hedge, &sigma);
        let q = noisy_peel_round(rt, sigma, tau)?;
        for (m, qv) in losses.iter_mut().zip(&q) {
            *m = (1.0 - qv / cfg.lambda_star) / cfg.width;
        }
        hedge.update(&losses)?;
    }
    Ok(())
}

/// Output of [`dsg_ledp_core`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoreOutput {
    pub ordering: Ordering,
    pub chosen_round: usize,
}

/// `T` rounds of: order by nonincreasing load (ties by id), collect noisy
/// peel counts, add them to the loads. Returns a uniformly random round's
/// ordering. Costs `T/(2τ²)` zCDP.
pub fn dsg_ledp_core(rt: &mut Runtime<'_>, rounds: usize, tau: f64) -> Result<CoreOutput> {
    check_rounds_tau(rounds, tau)?;
    let chosen = draw_round(rt, rounds);
    let mut loads = vec![0.0; rt.n()];
    let mut kept = None;
    for t in 0..rounds {
        let sigma = Ordering::by_scores_desc(&loads);
        if t == chosen {
            kept = Some(sigma.clone());
        }
        let q = noisy_peel_round(rt, sigma, tau)?;
        loads.iter_mut().zip(&q).for_each(|(l, x)| *l += x);
    }
    rt.publish("chosen-round", Payload::Index(chosen))?;
    Ok(CoreOutput {
        ordering: kept.expect("chosen round is in range"),
        chosen_round: chosen,
    })
}

pub(crate) fn warn_small_tau(n: usize, rounds: usize, varsigma: f64) {
    if varsigma > 0.0 && (rounds as f64).sqrt() * varsigma < n as f64 {
        log::warn!(
            "sqrt(T)·ς = {} is below n = {n}; the utility analysis assumes otherwise",
            (rounds as f64).sqrt() * varsigma
        );
    }
}

/// `⌈c·log₂ n⌉` independent runs of core + peeling with `τ = sqrt(T)·ς`;
/// returns the run with the largest noisy density. Costs `⌈c·log₂ n⌉/ς²`.
pub fn dsg_ledp(
    rt: &mut Runtime<'_>,
    rounds: usize,
    varsigma: f64,
    c: f64,
) -> Result<DensityResult> {
    if !(c > 0.0) {
        return Err(invalid("c", format!("{c} must be positive")));
    }
    warn_small_tau(rt.n(), rounds, varsigma);
    let tau = (rounds as f64).sqrt() * varsigma;
    let (mark, start) = (rt.ledger().len(), rt.round());
    let reps = ledp_repetitions(rt.n(), c);
    let outs = rt.run_children("repetition", reps, false, |_, child| {
        let core = dsg_ledp_core(child, rounds, tau)?;
        peeling(child, &core.ordering, varsigma)
    })?;
    let best = argmax_by(&outs, |o| o.noisy_density);
    rt.publish("selected", Payload::Index(best))?;
    let out = &outs[best];
    Ok(DensityResult {
        set: out.set.clone(),
        noisy_density: out.noisy_density,
        budget: rt.ledger().total_since(mark),
        rounds: rt.round() - start,
        selection: None,
    })
}

/// First index of the maximum.
pub(crate) fn argmax_by<T>(xs: &[T], key: impl Fn(&T) -> f64) -> usize {
    let mut best = 0;
    for (i, x) in xs.iter().enumerate() {
        if key(x) > key(&xs[best]) {
            best = i;
        }
    }
    best
}

/// One core run plus one peeling. Costs `1/ς²` zCDP.
pub fn centralized_dsg_core(
    rt: &mut Runtime<'_>,
    rounds: usize,
    varsigma: f64,
) -> Result<DensityResult> {
    warn_small_tau(rt.n(), rounds, varsigma);
    let tau = (rounds as f64).sqrt() * varsigma;
    let (mark, start) = (rt.ledger().len(), rt.round());
    let core = dsg_ledp_core(rt, rounds, tau)?;
    let out = peeling(rt, &core.ordering, varsigma)?;
    Ok(DensityResult {
        set: out.set,
        noisy_density: out.noisy_density,
        budget: rt.ledger().total_since(mark),
        rounds: rt.round() - start,
        selection: None,
    })
}

/// [`centralized_dsg_core`] under private selection with parameter `γ`.
pub fn centralized_dsg(
    rt: &mut Runtime<'_>,
    rounds: usize,
    varsigma: f64,
    gamma: f64,
) -> Result<DensityResult> {
    let per_copy = PrivacyBudget::new(1.0 / (varsigma * varsigma))?;
    select_copies(rt, gamma, per_copy, |child| {
        centralized_dsg_core(child, rounds, varsigma)
    })
}

/// Draw the number of copies from the curator stream, run them as child
/// protocols and keep the best by noisy density.
pub(crate) fn select_copies<F>(
    rt: &mut Runtime<'_>,
    gamma: f64,
    per_copy: PrivacyBudget,
    copy: F,
) -> Result<DensityResult>
where
    F: Fn(&mut Runtime<'_>) -> Result<DensityResult> + Sync + Send,
{
    let copies = draw_copies(&mut rt.curator_stream("copies"), gamma)?;
    rt.publish("copies", Payload::Index(copies))?;
    let (mark, start) = (rt.ledger().len(), rt.round());
    let outs = rt.run_children("copy", copies, false, |_, child| copy(child))?;
    let best = argmax_by(&outs, |o| o.noisy_density);
    rt.publish("selected", Payload::Index(best))?;
    let out = &outs[best];
    Ok(DensityResult {
        set: out.set.clone(),
        noisy_density: out.noisy_density,
        budget: rt.ledger().total_since(mark),
        rounds: rt.round() - start,
        selection: Some(SelectionInfo {
            copies,
            gamma,
            per_copy,
        }),
    })
}
