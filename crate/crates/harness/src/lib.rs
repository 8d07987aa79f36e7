//! Experiment runner for the relay optimizer: scenario files, single solves,
//! `g` landscapes, convergence traces, method comparisons over parameter
//! sweeps and model self-checks, all written as plain CSV.

pub mod config;
pub mod error;
pub mod fd;
pub mod landscape;
pub mod run;
pub mod sweep;
pub mod table;
pub mod verify;

pub use config::{load_scenario, parse_scenario, Scenario, REFERENCE_CFG};
pub use error::{ConfigError, HarnessError, Result};
pub use landscape::{landscape, LandscapeSpec};
pub use run::{run_method, RunRecord};
pub use sweep::{compare, convergence, point_seed, Execution, SweepParam, SweepSpec};
pub use table::Table;
pub use verify::{verify, verify_with, Derivatives, VerifyReport};
