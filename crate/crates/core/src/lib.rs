//! Private densest-subgraph algorithms under edge local differential privacy.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`]: graphs, orderings, exact densities, generators and I/O.
//! * [`privacy`]: noise samplers, zCDP budgets and the accountant.
//! * [`ledp`]: the simulated curator/node runtime with transcripts.
//! * [`hedge`]: multiplicative weights over noisy losses.
//! * [`dsg`]: the unweighted LEDP and centralized pipelines.
//! * [`weighted`], [`directed`]: the node-weighted and directed pipelines.
//! * [`pure_peel`]: noisy-degree peeling under pure ε-LEDP.
//! * [`density_value`]: private release of the optimal density value.
//! * [`oracle`]: exact and approximate non-private baselines.

// `!(x > 0.0)` guards are how NaN gets rejected along with bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod density_value;
pub mod directed;
pub mod dsg;
pub mod error;
pub mod exec;
pub mod graph;
pub mod hedge;
pub mod ledp;
pub mod oracle;
pub mod privacy;
pub mod pure_peel;
pub mod rng;
pub mod weighted;

pub use error::{DsgError, Result};
pub use exec::Execution;
pub use rng::StreamKey;
