//! Solvers for the joint hover-position / blocklength-split problem.

mod blocklength;
mod eval;
mod grid;
mod joint;
mod location;
mod types;

pub use blocklength::{below_capacity_range, optimize_blocklength};
pub use grid::{baseline_fixed_m, baseline_fixed_x, exhaustive_search, location_grid};
pub use joint::{joint_optimize, InitialPoint};
pub use location::{g_prime_sign_changes, optimize_location};
pub use types::{Candidate, IterationRecord, IterationTrace, Method, Solution, SolverConfig};

use crate::error::Result;
use crate::model::ScenarioParams;

/// Run `method` with its default initialization.
pub fn solve(p: &ScenarioParams, method: Method, cfg: &SolverConfig) -> Result<Solution> {
    match method {
        Method::Joint => Ok(joint_optimize(p, cfg, None)?.0),
        Method::Exhaustive => exhaustive_search(p, cfg),
        Method::FixedX => baseline_fixed_x(p, cfg),
        Method::FixedM => baseline_fixed_m(p, cfg),
    }
}
