use crate::error::{invalid, Result};
use rand::Rng;
use rand_distr::{Distribution, Geometric, StandardNormal};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    Gaussian,
    Geometric,
    Laplace,
}

/// A noise distribution. `scale` is the standard deviation for Gaussian
/// noise, the privacy parameter ε per unit sensitivity for symmetric
/// geometric noise, and `b` for Laplace noise. A scale of 0 is the explicit
/// zero-noise debug setting for every kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub scale: f64,
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(invalid(
                "scale",
                format!("{scale} must be positive and finite"),
            ));
        }
        Ok(NoiseSpec { kind, scale })
    }

    pub fn zero(kind: NoiseKind) -> Self {
        NoiseSpec { kind, scale: 0.0 }
    }

    pub fn is_zero(&self) -> bool {
        self.scale == 0.0
    }

    /// Pure ε for the Laplace and geometric mechanisms at sensitivity `delta_f`.
    pub fn pure_eps(&self, delta_f: f64) -> Option<f64> {
        match self.kind {
            NoiseKind::Gaussian => None,
            _ if self.is_zero() => Some(f64::INFINITY),
            NoiseKind::Geometric => Some(self.scale * delta_f),
            NoiseKind::Laplace => Some(delta_f / self.scale),
        }
    }

    /// zCDP cost of one release at ℓ₂-sensitivity `delta_f`.
    pub fn zcdp_cost(&self, delta_f: f64) -> f64 {
        if delta_f == 0.0 {
            return 0.0;
        }
        match self.kind {
            NoiseKind::Gaussian if self.is_zero() => f64::INFINITY,
            NoiseKind::Gaussian => delta_f * delta_f / (2.0 * self.scale * self.scale),
            _ => super::pure_to_zcdp(self.pure_eps(delta_f).expect("pure mechanism")),
        }
    }

    /// One draw for a query of unit sensitivity.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        match self.kind {
            NoiseKind::Gaussian => self.scale * rng.sample::<f64, _>(StandardNormal),
            NoiseKind::Geometric => geometric_unchecked(rng, self.scale.exp()) as f64,
            NoiseKind::Laplace => laplace_unchecked(rng, self.scale),
        }
    }
}

/// One draw from `N(0, std²)`; `std = 0` gives exactly 0.
pub fn gaussian_sample<R: Rng + ?Sized>(rng: &mut R, std: f64) -> Result<f64> {
    if !(std >= 0.0) {
        return Err(invalid("std", format!("{std} is negative")));
    }
    if std == 0.0 {
        return Ok(0.0);
    }
    Ok(std * rng.sample::<f64, _>(StandardNormal))
}

/// Symmetric geometric noise with pmf `(γ−1)/(γ+1) · γ^{−|k|}`.
/// `γ = ∞` is the zero-noise limit and returns 0.
pub fn sym_geometric_sample<R: Rng + ?Sized>(rng: &mut R, gamma: f64) -> Result<i64> {
    if !(gamma > 1.0) {
        return Err(invalid("gamma", format!("{gamma} must exceed 1")));
    }
    Ok(geometric_unchecked(rng, gamma))
}

fn geometric_unchecked<R: Rng + ?Sized>(rng: &mut R, gamma: f64) -> i64 {
    if gamma.is_infinite() {
        return 0;
    }
    // Difference of two one-sided geometric counts with success probability 1 − 1/γ.
    let g = Geometric::new(1.0 - 1.0 / gamma).expect("probability in (0, 1]");
    g.sample(rng) as i64 - g.sample(rng) as i64
}

/// One draw from `Lap(b)`; `b = 0` gives exactly 0.
pub fn laplace_sample<R: Rng + ?Sized>(rng: &mut R, b: f64) -> Result<f64> {
    if !(b >= 0.0) {
        return Err(invalid("b", format!("{b} is negative")));
    }
    if b == 0.0 {
        return Ok(0.0);
    }
    Ok(laplace_unchecked(rng, b))
}

fn laplace_unchecked<R: Rng + ?Sized>(rng: &mut R, b: f64) -> f64 {
    loop {
        let u: f64 = rng.random::<f64>() - 0.5;
        if u > -0.5 {
            return -b * u.signum() * (1.0 - 2.0 * u.abs()).ln();
        }
    }
}
