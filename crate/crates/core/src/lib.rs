//! Finite-blocklength error model for a two-hop decode-and-forward UAV relay,
//! and solvers that place the UAV and split the blocklength budget between the
//! two hops.
//!
//! [`model`] evaluates channel SNRs, the normal-approximation error of each hop,
//! the end-to-end error and the analytic derivatives used by the bisection
//! searches. [`optimizer`] holds the blocklength and location bisections, the
//! perturbed alternating solver, an exhaustive grid oracle and two baselines.

pub mod error;
pub mod model;
pub mod optimizer;

pub use error::{ModelError, Result};
pub use model::{Allocation, Hop, ScenarioParams};
pub use optimizer::{IterationRecord, IterationTrace, Method, Solution, SolverConfig};
