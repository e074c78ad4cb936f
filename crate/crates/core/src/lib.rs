//! Shape-constrained least squares in linear time, with the verification
//! machinery around it.
//!
//! The toolkit has three layers:
//!
//! - [`isotonic`] and [`unimodal`]: exact Euclidean projections onto
//!   monotone cones (pool-adjacent-violators) and the exact unimodal
//!   least-squares fit via prefix/suffix error scans, all O(n).
//! - [`geometry`]: Dykstra projections onto intersections of convex sets,
//!   localized suprema over cone slices, and numerical checks of the
//!   deterministic identities they satisfy.
//! - [`risklab`]: a reproducible Monte Carlo harness that measures the
//!   estimator's risk against closed-form bounds.
//!
//! [`oracle`] holds brute-force references for small instances; they back
//! the test suite and the CLI's `--oracle` flag.

pub mod error;
pub mod geometry;
pub mod isotonic;
pub mod oracle;
pub mod risklab;
pub mod rng;
pub mod unimodal;
mod util;

pub use error::Error;
pub use isotonic::{pava, prefix_isotonic_sse, suffix_antitonic_sse, Direction, IsotonicFit};
pub use unimodal::{is_unimodal, project_onto_mode_cone, unimodal_lse, UnimodalFit};
