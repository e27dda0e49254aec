//! Non-private baselines: exhaustive search, an exact flow-based solver and
//! greedy peeling. Used as ground truth by the tests and the harness.

mod brute;
mod flow;
mod greedy;

pub use brute::{
    exact_directed_bruteforce, exact_dsg_bruteforce, exact_weighted_bruteforce, BRUTE_FORCE_LIMIT,
    DIRECTED_BRUTE_FORCE_LIMIT,
};
pub use flow::exact_dsg_flow;
pub use greedy::charikar_greedy;
