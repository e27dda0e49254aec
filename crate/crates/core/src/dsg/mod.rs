//! Unweighted private densest subgraph.
//!
//! * [`peeling`]: noisy peel counts along a public ordering, best noisy prefix.
//! * [`nop_mwu`]: Hedge over vertices with noisy order-packing losses. Needs
//!   λ*, so it is a test oracle rather than a private algorithm.
//! * [`dsg_ledp_core`]: the load-based LEDP equivalent of [`nop_mwu`].
//! * [`dsg_ledp`]: repeated core + peeling, best by noisy density.
//! * [`centralized_dsg`]: one core + peeling per copy, wrapped in [`ps_select`].

pub(crate) mod core;
pub(crate) mod peeling;
mod rounding;
mod select;

pub use self::core::{
    centralized_dsg, centralized_dsg_core, default_rounds, dsg_ledp, dsg_ledp_core, nop_mwu,
    nop_mwu_trajectory, CoreOutput, MwuConfig, NopMwuOutput, MAX_ROUNDS,
};
pub use peeling::{peeling, PeelOutcome};
pub use rounding::{best_threshold_set, cover_value};
pub use select::{draw_copies, ps_select, ps_select_epsilon, Selection};

use crate::error::Result;
use crate::graph::{Density, Graph};
use crate::privacy::{zcdp_to_epsdelta, PrivacyBudget};
use serde::{Deserialize, Serialize};

/// Private-selection metadata for results produced through [`ps_select`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionInfo {
    pub copies: usize,
    pub gamma: f64,
    /// zCDP cost of a single copy.
    pub per_copy: PrivacyBudget,
}

/// Output of a private densest-subgraph run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityResult {
    /// Sorted vertex ids.
    pub set: Vec<usize>,
    /// The noisy density the selection used.
    pub noisy_density: f64,
    /// zCDP charged to the ledger by this call.
    pub budget: PrivacyBudget,
    /// Query rounds issued by this call.
    pub rounds: usize,
    pub selection: Option<SelectionInfo>,
}

impl DensityResult {
    /// False for zero-noise runs.
    pub fn is_private(&self) -> bool {
        match &self.selection {
            Some(s) => s.per_copy.is_private(),
            None => self.budget.is_private(),
        }
    }

    /// (ε at δ) for this result: the selection bound when wrapped, the
    /// zCDP conversion otherwise.
    pub fn eps_at(&self, delta: f64) -> Result<f64> {
        match &self.selection {
            Some(s) => ps_select_epsilon(s.per_copy, s.gamma, delta),
            None => zcdp_to_epsdelta(self.budget, delta),
        }
    }

    /// Exact density of the returned set. Evaluation only: never feed this
    /// back into a private decision.
    pub fn true_density(&self, g: &Graph) -> Result<Density> {
        g.density(&self.set)
    }
}
