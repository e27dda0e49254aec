use crate::error::{invalid, DsgError, Result};
use serde::{Deserialize, Serialize};

/// A zCDP parameter. `+∞` marks a run that is not private (zero-noise mode).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct PrivacyBudget {
    #[serde(with = "super::finite_or_null")]
    zcdp_budget: f64,
}

impl PrivacyBudget {
    pub fn new(zcdp_budget: f64) -> Result<Self> {
        if !(zcdp_budget >= 0.0) {
            return Err(invalid(
                "zcdp_budget",
                format!("{zcdp_budget} is negative or NaN"),
            ));
        }
        Ok(PrivacyBudget { zcdp_budget })
    }

    pub fn zero() -> Self {
        PrivacyBudget { zcdp_budget: 0.0 }
    }

    pub fn zcdp(&self) -> f64 {
        self.zcdp_budget
    }

    pub fn is_private(&self) -> bool {
        self.zcdp_budget.is_finite()
    }

    /// ε at the given δ, see [`zcdp_to_epsdelta`].
    pub fn eps_at(&self, delta: f64) -> Result<f64> {
        zcdp_to_epsdelta(*self, delta)
    }
}

/// An (ε, δ) pair with ε > 0 and 0 < δ < 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsDelta {
    pub eps: f64,
    pub delta: f64,
}

impl EpsDelta {
    pub fn new(eps: f64, delta: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(invalid("eps", format!("{eps} must be positive and finite")));
        }
        check_delta(delta)?;
        Ok(EpsDelta { eps, delta })
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(invalid("delta", format!("{delta} is outside (0, 1)")))
    }
}

/// How the parts of a parallel release cover the private edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Disjointness {
    /// Every edge influences exactly one part.
    Strict,
    /// Every edge influences at most two parts, as in degree queries.
    TwoCover,
}

pub fn compose_sequential(budgets: &[PrivacyBudget]) -> PrivacyBudget {
    PrivacyBudget {
        zcdp_budget: budgets.iter().map(|b| b.zcdp_budget).sum(),
    }
}

pub fn compose_parallel(budgets: &[PrivacyBudget], disjointness: Disjointness) -> PrivacyBudget {
    let max = budgets.iter().map(|b| b.zcdp_budget).fold(0.0, f64::max);
    let factor = match disjointness {
        Disjointness::Strict => 1.0,
        Disjointness::TwoCover => 2.0,
    };
    PrivacyBudget {
        zcdp_budget: factor * max,
    }
}

/// ε-DP implies (ε²/2)-zCDP.
pub fn pure_to_zcdp(eps: f64) -> f64 {
    eps * eps / 2.0
}

/// `ρα + ln(1/δ)/(α−1)`: the (ε, δ) guarantee obtained from the order-α
/// Rényi bound of a ρ-zCDP mechanism.
pub fn rdp_epsilon(budget: PrivacyBudget, delta: f64, alpha: f64) -> Result<f64> {
    check_delta(delta)?;
    if !(alpha > 1.0) {
        return Err(invalid("alpha", format!("{alpha} must exceed 1")));
    }
    Ok(budget.zcdp_budget * alpha + (1.0 / delta).ln() / (alpha - 1.0))
}

/// The order minimising [`rdp_epsilon`]: `1 + sqrt(ln(1/δ)/ρ)`.
pub fn optimal_alpha(budget: PrivacyBudget, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    Ok(1.0 + ((1.0 / delta).ln() / budget.zcdp_budget).sqrt())
}

/// `ρ + 2 sqrt(ρ ln(1/δ))`, the minimum of [`rdp_epsilon`] over α.
pub fn zcdp_to_epsdelta(budget: PrivacyBudget, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let rho = budget.zcdp_budget;
    Ok(rho + 2.0 * (rho * (1.0 / delta).ln()).sqrt())
}

/// Number of independent LEDP repetitions, `max(1, ⌈c·log₂ n⌉)`.
pub fn ledp_repetitions(n: usize, c: f64) -> usize {
    ((c * (n.max(1) as f64).log2()).ceil() as usize).max(1)
}

/// Which calibration [`sigma_for_target`] applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaVariant {
    /// `4 sqrt(R ln(1/δ)) / ε` with `R = ⌈c·log₂ n⌉`.
    Ledp { c: f64 },
    /// `6 sqrt(ln(n^c/δ)) / ε`, for use with private selection at `γ = n^{-c}`.
    Centralized { c: f64 },
    /// `4 sqrt(K ln(1/δ)) / ε` for `K` weighted core runs.
    Weighted { k: usize },
    /// `4 sqrt(M ln(1/δ)) / ε` for a total spend of `M/ς²` zCDP.
    Directed { m: f64 },
    /// `8 sqrt(ln(n^c/δ)) / ε`: three releases per copy under selection.
    CentralizedDirected { c: f64 },
}

/// Noise scale ς meeting (ε, δ) for the given variant.
pub fn sigma_for_target(eps: f64, delta: f64, n: usize, variant: SigmaVariant) -> Result<f64> {
    check_delta(delta)
        .map_err(|_| DsgError::InfeasiblePrivacy(format!("delta = {delta} is outside (0, 1)")))?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(DsgError::InfeasiblePrivacy(format!(
            "eps = {eps} must be positive and finite"
        )));
    }
    if n < 2 {
        return Err(DsgError::InfeasiblePrivacy(format!(
            "n = {n}, need at least 2 vertices"
        )));
    }
    let log_inv_delta = (1.0 / delta).ln();
    let ledp_hypothesis = |runs: f64| -> Result<f64> {
        if eps >= 8.0 * log_inv_delta {
            return Err(DsgError::InfeasiblePrivacy(format!(
                "eps = {eps} violates eps < 8 ln(1/delta) = {}",
                8.0 * log_inv_delta
            )));
        }
        Ok(4.0 * (runs * log_inv_delta).sqrt() / eps)
    };
    let selection_log = |c: f64| -> Result<f64> {
        if !(c > 0.0) {
            return Err(DsgError::InfeasiblePrivacy(format!(
                "c = {c} must be positive"
            )));
        }
        Ok(c * (n as f64).ln() + log_inv_delta)
    };
    match variant {
        SigmaVariant::Ledp { c } => {
            if !(c > 0.0) {
                return Err(DsgError::InfeasiblePrivacy(format!(
                    "c = {c} must be positive"
                )));
            }
            ledp_hypothesis(ledp_repetitions(n, c) as f64)
        }
        SigmaVariant::Weighted { k } => ledp_hypothesis(k.max(1) as f64),
        SigmaVariant::Directed { m } => {
            if !(m > 0.0 && m.is_finite()) {
                return Err(DsgError::InfeasiblePrivacy(format!(
                    "spend m = {m} must be positive"
                )));
            }
            ledp_hypothesis(m)
        }
        SigmaVariant::Centralized { c } => Ok(6.0 * selection_log(c)?.sqrt() / eps),
        SigmaVariant::CentralizedDirected { c } => Ok(8.0 * selection_log(c)?.sqrt() / eps),
    }
}
