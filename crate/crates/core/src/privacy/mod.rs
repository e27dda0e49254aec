//! Noise samplers, zCDP budgets, composition and the privacy accountant.

mod accountant;
mod budget;
mod noise;

pub use accountant::{Accountant, LedgerEntry};
pub use budget::{
    compose_parallel, compose_sequential, ledp_repetitions, optimal_alpha, pure_to_zcdp,
    rdp_epsilon, sigma_for_target, zcdp_to_epsdelta, Disjointness, EpsDelta, PrivacyBudget,
    SigmaVariant,
};
pub use noise::{gaussian_sample, laplace_sample, sym_geometric_sample, NoiseKind, NoiseSpec};

/// Serialize infinite costs (zero-noise runs) as JSON `null`.
pub(crate) mod finite_or_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}
