use crate::error::Result;
use crate::graph::{backward_degree, check_len, Ordering};
use crate::ledp::{Parties, Payload, Randomizer, Runtime};
use crate::privacy::Disjointness;

/// Best noisy prefix of a public ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct PeelOutcome {
    /// Sorted vertex ids.
    pub set: Vec<usize>,
    pub noisy_density: f64,
}

/// Each node reports `q(σ)_v + N(0, ς²)`; the curator returns the prefix
/// maximising the noisy density (ties to the shorter prefix). Costs
/// `1/(2ς²)` zCDP since every edge is counted by exactly one endpoint.
pub fn peeling(rt: &mut Runtime<'_>, sigma: &Ordering, varsigma: f64) -> Result<PeelOutcome> {
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
    let outcome = best_noisy_prefix(sigma.order(), |v| q[v], |_| 1.0);
    rt.publish("peel-set", Payload::Set(outcome.set.clone()))?;
    rt.publish("peel-density", Payload::Scalar(outcome.noisy_density))?;
    Ok(outcome)
}

/// Scan prefixes of `order` maximising `Σ counts / size(prefix)`.
pub(crate) fn best_noisy_prefix(
    order: &[usize],
    count: impl Fn(usize) -> f64,
    size: impl Fn(usize) -> f64,
) -> PeelOutcome {
    let mut best = (0, f64::NEG_INFINITY);
    let mut sum = 0.0;
    let mut denom = 0.0;
    for (i, &v) in order.iter().enumerate() {
        sum += count(v);
        denom += size(v);
        let d = sum / denom;
        if d > best.1 {
            best = (i + 1, d);
        }
    }
    let mut set = order[..best.0].to_vec();
    set.sort_unstable();
    PeelOutcome {
        set,
        noisy_density: best.1,
    }
}
