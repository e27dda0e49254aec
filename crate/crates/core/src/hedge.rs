//! Hedge over `n` experts with arbitrary, possibly noisy, losses.
//!
//! Weights live in the log domain so that horizons of millions of rounds
//! neither underflow nor lose the ordering of experts.

use crate::error::{invalid, DsgError, Result};
use crate::privacy::{Accountant, Disjointness, LedgerEntry, NoiseKind};
use crate::rng::StreamKey;
use rand::Rng;
use rand_distr::StandardNormal;

/// Hedge state with step `η = sqrt(ln n / T)` fixed at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Hedge {
    log_weights: Vec<f64>,
    rounds_done: usize,
    horizon: usize,
    step: f64,
}

impl Hedge {
    pub fn new(n: usize, horizon: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "need at least one expert"));
        }
        if horizon == 0 {
            return Err(invalid("horizon", "need at least one round"));
        }
        let step = ((n as f64).ln() / horizon as f64).sqrt();
        Ok(Hedge {
            log_weights: vec![0.0; n],
            rounds_done: 0,
            horizon,
            step,
        })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn rounds_done(&self) -> usize {
        self.rounds_done
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    /// Current distribution, via a max-shifted softmax.
    pub fn distribution(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.log_weights.len()];
        self.distribution_into(&mut p);
        p
    }

    pub fn distribution_into(&self, out: &mut [f64]) {
        softmax_into(&self.log_weights, out);
    }

    /// `w_i ← w_i · exp(−η m̂_i)`.
    pub fn update(&mut self, losses: &[f64]) -> Result<()> {
        if self.rounds_done >= self.horizon {
            return Err(DsgError::HorizonExhausted(self.horizon));
        }
        if losses.len() != self.log_weights.len() {
            return Err(invalid(
                "losses",
                format!(
                    "{} losses for {} experts",
                    losses.len(),
                    self.log_weights.len()
                ),
            ));
        }
        if let Some(i) = losses.iter().position(|l| !l.is_finite()) {
            return Err(invalid(
                "losses",
                format!("loss of expert {i} is {}", losses[i]),
            ));
        }
        for (w, l) in self.log_weights.iter_mut().zip(losses) {
            *w -= self.step * l;
        }
        self.rounds_done += 1;
        Ok(())
    }
}

pub(crate) fn softmax_into(log_weights: &[f64], out: &mut [f64]) {
    let max = log_weights
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let mut z = 0.0;
    for (o, &w) in out.iter_mut().zip(log_weights) {
        *o = (w - max).exp();
        z += *o;
    }
    out.iter_mut().for_each(|o| *o /= z);
}

/// Realised regret measured on the mean losses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegretReport {
    pub algorithm_loss: f64,
    pub best_expert_loss: f64,
    pub regret: f64,
}

/// `Σ_t ⟨m_t, p_t⟩ − min_i Σ_t m_{t,i}`.
pub fn regret_report(mean_losses: &[Vec<f64>], distributions: &[Vec<f64>]) -> Result<RegretReport> {
    if mean_losses.len() != distributions.len() {
        return Err(invalid(
            "history",
            format!(
                "{} loss rows but {} distributions",
                mean_losses.len(),
                distributions.len()
            ),
        ));
    }
    let n = mean_losses.first().map_or(0, Vec::len);
    let mut totals = vec![0.0; n];
    let mut algorithm_loss = 0.0;
    for (t, (m, p)) in mean_losses.iter().zip(distributions).enumerate() {
        if m.len() != n || p.len() != n {
            return Err(invalid(
                "history",
                format!("round {t} has mismatched lengths"),
            ));
        }
        algorithm_loss += m.iter().zip(p).map(|(a, b)| a * b).sum::<f64>();
        totals.iter_mut().zip(m).for_each(|(s, x)| *s += x);
    }
    let best_expert_loss = totals.iter().copied().fold(f64::INFINITY, f64::min);
    let best_expert_loss = if best_expert_loss.is_finite() {
        best_expert_loss
    } else {
        0.0
    };
    Ok(RegretReport {
        algorithm_loss,
        best_expert_loss,
        regret: algorithm_loss - best_expert_loss,
    })
}

/// Hedge run on Gaussian-perturbed losses, with the perturbation charged to a ledger.
#[derive(Debug, Clone)]
pub struct DpHedgeRun {
    pub distributions: Vec<Vec<f64>>,
    pub mean_losses: Vec<Vec<f64>>,
    pub ledger: Accountant,
}

/// Run `horizon` rounds of Hedge where round `t`'s loss vector is
/// `losses(t, p_t)` plus `N(0, ν²)` noise per coordinate, declared to have
/// ℓ₂-sensitivity `sensitivity`. The ledger totals `Δ² T / (2ν²)`.
pub fn dp_hedge<F>(
    n: usize,
    horizon: usize,
    sensitivity: f64,
    nu: f64,
    key: StreamKey,
    mut losses: F,
) -> Result<DpHedgeRun>
where
    F: FnMut(usize, &[f64]) -> Vec<f64>,
{
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(invalid("nu", format!("{nu} must be positive")));
    }
    if !(sensitivity >= 0.0) {
        return Err(invalid("sensitivity", format!("{sensitivity} is negative")));
    }
    let mut h = Hedge::new(n, horizon)?;
    let mut ledger = Accountant::new();
    let mut distributions = Vec::with_capacity(horizon);
    let mut mean_losses = Vec::with_capacity(horizon);
    for t in 0..horizon {
        let p = h.distribution();
        let m = losses(t, &p);
        let mut rng = key.derive(t as u64).stream();
        let noisy: Vec<f64> = m
            .iter()
            .map(|x| x + nu * rng.sample::<f64, _>(StandardNormal))
            .collect();
        h.update(&noisy)?;
        ledger.charge(LedgerEntry {
            round: t,
            label: "hedge-losses".into(),
            mechanism: NoiseKind::Gaussian,
            sensitivity,
            scale: nu,
            parties: 1,
            disjointness: Disjointness::Strict,
            zcdp_cost: sensitivity * sensitivity / (2.0 * nu * nu),
            pure_eps: None,
        });
        distributions.push(p);
        mean_losses.push(m);
    }
    Ok(DpHedgeRun {
        distributions,
        mean_losses,
        ledger,
    })
}
