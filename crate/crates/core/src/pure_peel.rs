//! Pure ε-LEDP parallel peeling with geometric noise on remaining degrees.

use crate::dsg::DensityResult;
use crate::error::{invalid, Result};
use crate::ledp::{Parties, Payload, Randomizer, Runtime};
use crate::privacy::{Disjointness, NoiseSpec};

/// One round of the peeling.
#[derive(Debug, Clone, PartialEq)]
pub struct PeelRound {
    pub survivors: Vec<usize>,
    /// `D(v) = d_S(v) + Geom`, aligned with `survivors`.
    pub noisy_degrees: Vec<f64>,
    /// `mean(D)/2`.
    pub estimate: f64,
    pub threshold: f64,
    pub removed: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PurePeelRun {
    pub result: DensityResult,
    pub trace: Vec<PeelRound>,
}

/// `⌊log_{1+η} n⌋ + 1`, the most rounds a run can take.
pub fn max_pure_rounds(n: usize, eta: f64) -> usize {
    if n <= 1 {
        return 1;
    }
    ((n as f64).ln() / (1.0 + eta).ln()).floor() as usize + 1
}

/// Per-round ε so that `2ε'` per round over [`max_pure_rounds`] stays within
/// `eps_total`.
pub fn pure_eps_per_round(n: usize, eps_total: f64, eta: f64) -> Result<f64> {
    check_eta(eta)?;
    if !(eps_total > 0.0) {
        return Err(invalid("eps", format!("{eps_total} must be positive")));
    }
    Ok(eps_total / (2.0 * max_pure_rounds(n, eta) as f64))
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(invalid("eta", format!("{eta} must be positive")));
    }
    Ok(())
}

/// Remove every survivor with `D(v) <= (1+η)·mean(max(D, 0))` until none are
/// left; return the survivor set with the largest `mean(D)/2`.
/// `eps_per_round = ∞` means no noise (needs the runtime's zero-noise opt-in).
pub fn simple_pure_ledp(rt: &mut Runtime<'_>, eps_per_round: f64, eta: f64) -> Result<PurePeelRun> {
    check_eta(eta)?;
    if !(eps_per_round > 0.0) {
        return Err(invalid(
            "eps_per_round",
            format!("{eps_per_round} must be positive"),
        ));
    }
    let mut r = Randomizer::geometric("noisy-degree", eps_per_round, Disjointness::TwoCover);
    if eps_per_round == f64::INFINITY {
        r.noise = NoiseSpec::zero(r.noise.kind);
    }
    let (mark, start) = (rt.ledger().len(), rt.round());
    let mut survivors: Vec<usize> = (0..rt.n()).collect();
    let mut trace: Vec<PeelRound> = Vec::new();
    while !survivors.is_empty() {
        rt.publish("survivors", Payload::Set(survivors.clone()))?;
        let d = rt.collect(Parties::Subset(&survivors), &r, |v| {
            v.degree_into(v.board().set("survivors").expect("published above")) as f64
        })?;
        let noisy = d;
        let size = survivors.len() as f64;
        let estimate = noisy.iter().sum::<f64>() / size / 2.0;
        let threshold = (1.0 + eta) * noisy.iter().map(|x| x.max(0.0)).sum::<f64>() / size;
        let (mut removed, mut kept) = (Vec::new(), Vec::new());
        for (&v, &dv) in survivors.iter().zip(&noisy) {
            if dv <= threshold {
                removed.push(v)
            } else {
                kept.push(v)
            }
        }
        assert!(!removed.is_empty(), "the minimum is at most the threshold");
        assert!(
            kept.len() as f64 <= size / (1.0 + eta) * (1.0 + 1e-12),
            "Markov shrinkage"
        );
        trace.push(PeelRound {
            survivors: survivors.clone(),
            noisy_degrees: noisy,
            estimate,
            threshold,
            removed,
        });
        survivors = kept;
    }
    let best = (0..trace.len()).fold(0, |b, i| {
        if trace[i].estimate > trace[b].estimate {
            i
        } else {
            b
        }
    });
    rt.publish("selected", Payload::Index(best))?;
    let result = DensityResult {
        set: trace[best].survivors.clone(),
        noisy_density: trace[best].estimate,
        budget: rt.ledger().total_since(mark),
        rounds: rt.round() - start,
        selection: None,
    };
    Ok(PurePeelRun { result, trace })
}
