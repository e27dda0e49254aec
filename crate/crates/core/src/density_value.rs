//! Private release of the density value `ρ(G)` via clamping and Laplace noise.

use crate::error::{invalid, DsgError, Result};
use crate::graph::{Density, Graph};
use crate::oracle::exact_dsg_flow;
use crate::privacy::laplace_sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Largest graph for which the release computes `ρ(G)` itself.
pub const VALUE_ORACLE_LIMIT: usize = 5000;

/// Smallest clamp level used, keeping `2x − 1` positive.
pub const MIN_CLAMP: f64 = 0.51;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueMode {
    /// `x = sqrt(1/ε)`.
    Expectation,
    /// `x = sqrt(ln n / ε)`.
    Whp,
}

/// `ρ_x = max(ρ, x)` with sensitivity at most `1/(2x − 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClampedDensity {
    pub x: f64,
    pub rho_x: f64,
    pub sensitivity: f64,
}

impl ClampedDensity {
    pub fn new(rho: f64, x: f64) -> Result<Self> {
        if !(x > 0.5 && x.is_finite()) {
            return Err(invalid("x", format!("{x} must exceed 1/2")));
        }
        Ok(ClampedDensity {
            x,
            rho_x: rho.max(x),
            sensitivity: 1.0 / (2.0 * x - 1.0),
        })
    }
}

/// Clamp level for `mode`, floored at [`MIN_CLAMP`].
pub fn clamp_level(n: usize, eps: f64, mode: ValueMode) -> f64 {
    let x = match mode {
        ValueMode::Expectation => (1.0 / eps).sqrt(),
        ValueMode::Whp => ((n.max(2) as f64).ln() / eps).sqrt(),
    };
    x.max(MIN_CLAMP)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueRelease {
    pub value: f64,
    pub clamp: ClampedDensity,
    /// Pure ε spent.
    pub eps: f64,
}

/// `ρ_x(G) + Lap(1/((2x−1)ε))` with `ρ(G)` from the flow oracle. `ε = ∞`
/// gives `ρ_x(G)` exactly.
pub fn private_density_value<R: Rng + ?Sized>(
    g: &Graph,
    eps: f64,
    mode: ValueMode,
    rng: &mut R,
) -> Result<ValueRelease> {
    if g.n() > VALUE_ORACLE_LIMIT {
        return Err(DsgError::TooLarge {
            what: "exact density oracle; pass a precomputed density to private_density_value_from",
            n: g.n(),
            limit: VALUE_ORACLE_LIMIT,
        });
    }
    let rho = exact_dsg_flow(g)?.1.value();
    private_density_value_from(rho, g.n(), eps, mode, rng)
}

/// As [`private_density_value`] with the exact density supplied by the caller.
pub fn private_density_value_from<R: Rng + ?Sized>(
    rho: f64,
    n: usize,
    eps: f64,
    mode: ValueMode,
    rng: &mut R,
) -> Result<ValueRelease> {
    if !(eps > 0.0) {
        return Err(invalid("eps", format!("{eps} must be positive")));
    }
    if !(rho >= 0.0 && rho.is_finite()) {
        return Err(invalid("rho", format!("{rho} is not a density")));
    }
    let clamp = ClampedDensity::new(rho, clamp_level(n, eps, mode))?;
    let b = if eps == f64::INFINITY {
        0.0
    } else {
        clamp.sensitivity / eps
    };
    Ok(ValueRelease {
        value: clamp.rho_x + laplace_sample(rng, b)?,
        clamp,
        eps,
    })
}

/// Outcome of [`rho_x_sensitivity_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityReport {
    pub graphs: usize,
    pub neighbor_pairs: usize,
    /// `(x, bound, largest observed |ρ_x(G) − ρ_x(G')|)`.
    pub levels: Vec<(f64, f64, f64)>,
    pub violations: usize,
}

/// Enumerate every labelled graph on up to `n_max <= 6` vertices and every
/// single-edge neighbor, checking `|ρ_x(G) − ρ_x(G')| <= 1/(2x−1)` for
/// `x ∈ {1, 1.5, 2}`.
pub fn rho_x_sensitivity_check(n_max: usize) -> Result<SensitivityReport> {
    if n_max > 6 {
        return Err(DsgError::TooLarge {
            what: "sensitivity enumeration",
            n: n_max,
            limit: 6,
        });
    }
    let xs = [1.0, 1.5, 2.0];
    let mut report = SensitivityReport {
        graphs: 0,
        neighbor_pairs: 0,
        levels: xs
            .iter()
            .map(|&x| (x, 1.0 / (2.0 * x - 1.0), 0.0))
            .collect(),
        violations: 0,
    };
    for n in 1..=n_max {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let rho: Vec<f64> = (0u32..1 << pairs.len())
            .map(|mask| mask_density(n, &pairs, mask).value())
            .collect();
        report.graphs += rho.len();
        for mask in 0..rho.len() {
            for e in 0..pairs.len() {
                let other = mask ^ (1 << e);
                if other < mask {
                    continue;
                }
                report.neighbor_pairs += 1;
                for level in report.levels.iter_mut() {
                    let diff = (rho[mask].max(level.0) - rho[other].max(level.0)).abs();
                    level.2 = level.2.max(diff);
                    if diff > level.1 + 1e-12 {
                        report.violations += 1;
                    }
                }
            }
        }
    }
    Ok(report)
}

fn mask_density(n: usize, pairs: &[(usize, usize)], mask: u32) -> Density {
    let mut best = Density::zero();
    for set in 1u32..1 << n {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|&(i, &(u, v))| mask >> i & 1 == 1 && set >> u & 1 == 1 && set >> v & 1 == 1)
            .count();
        best = best.max(Density::new(edges as u64, set.count_ones() as u64));
    }
    best
}
