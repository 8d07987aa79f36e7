use std::fmt;
use std::str::FromStr;

use crate::error::{ModelError, Result};
use crate::model::Allocation;

/// Tolerances and iteration controls shared by all solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Blocklength bisection stops once the bracket is at most this wide.
    pub delta: f64,
    /// Location bisection tolerance in meters; also the exhaustive grid step.
    pub zeta: f64,
    /// Perturbations are drawn uniformly from `1..=n_max`.
    pub n_max: u32,
    pub t_max: u32,
    pub seed: u64,
    /// Stop once an outer iteration changes the objective by less than this
    /// fraction of its value. Zero (the default) always runs `t_max` iterations.
    pub early_stop_tol: f64,
    /// When set, scan `g'` on this many grid points for every location solve
    /// inside the joint solver and flag blocklengths with several sign changes.
    pub unimodality_scan: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            delta: 0.5,
            zeta: 0.1,
            n_max: 3,
            t_max: 10,
            seed: 0,
            early_stop_tol: 0.0,
            unimodality_scan: None,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    #[allow(clippy::neg_cmp_op_on_partial_ord)] // negated so NaN is rejected
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(ModelError::InvalidConfig(m));
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return bad(format!("delta must be > 0, got {}", self.delta));
        }
        if !(self.zeta > 0.0 && self.zeta.is_finite()) {
            return bad(format!("zeta must be > 0, got {}", self.zeta));
        }
        if self.n_max < 1 {
            return bad("n_max must be >= 1".into());
        }
        if self.t_max < 1 {
            return bad("t_max must be >= 1".into());
        }
        if !(self.early_stop_tol >= 0.0) {
            return bad(format!(
                "early_stop_tol must be >= 0, got {}",
                self.early_stop_tol
            ));
        }
        if matches!(self.unimodality_scan, Some(n) if n < 2) {
            return bad("unimodality scan needs at least 2 points".into());
        }
        Ok(())
    }
}

/// Solver that produced a [`Solution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Joint,
    Exhaustive,
    FixedX,
    FixedM,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Joint,
        Method::Exhaustive,
        Method::FixedX,
        Method::FixedM,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Joint => "joint",
            Method::Exhaustive => "exhaustive",
            Method::FixedX => "fixedx",
            Method::FixedM => "fixedm",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "joint" => Ok(Method::Joint),
            "exhaustive" => Ok(Method::Exhaustive),
            "fixedx" => Ok(Method::FixedX),
            "fixedm" => Ok(Method::FixedM),
            other => Err(format!(
                "unknown method '{other}' (expected joint, exhaustive, fixedx or fixedm)"
            )),
        }
    }
}

/// Hover position and blocklength split returned by a solver.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x: f64,
    pub allocation: Allocation,
    /// Surrogate `eps1 + eps2`, the quantity the solvers minimize.
    pub eps_approx: f64,
    /// Exact end-to-end error `eps1 + (1 - eps1) eps2`.
    pub eps_exact: f64,
    pub method: Method,
    /// Objective or derivative evaluations spent by the solver. Each one
    /// evaluates both hops once.
    pub eval_count: u64,
    /// Outer iterations; zero for the non-iterative methods.
    pub iterations: u32,
}

/// A `(m1, x)` pair with its surrogate value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub m1: u32,
    pub x: f64,
    pub eps_approx: f64,
}

/// One outer iteration of the joint solver.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: u32,
    /// Blocklength returned by the blocklength search at the previous location.
    pub m1_from_blocklength_step: u32,
    pub n_left: u32,
    pub n_right: u32,
    /// Left-perturbed, unperturbed and right-perturbed candidates, in that order.
    pub candidates: [Candidate; 3],
    pub selected: Candidate,
    /// True when every candidate was worse than the previous iterate, which
    /// was then kept.
    pub kept_previous: bool,
    pub objective: f64,
    /// Cumulative evaluation count at the end of the iteration.
    pub eval_count: u64,
    /// Candidate blocklengths whose `g'` changed sign more than once on the
    /// diagnostic scan. Always empty unless the scan is enabled.
    pub multimodal_m1: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub initial: Candidate,
    pub records: Vec<IterationRecord>,
    /// `g'` evaluations spent on the optional unimodality scan; not part of
    /// `Solution::eval_count`.
    pub diagnostic_evals: u64,
}

impl IterationTrace {
    /// Objective before the first iteration followed by the value after each one.
    pub fn objectives(&self) -> Vec<f64> {
        std::iter::once(self.initial.eps_approx)
            .chain(self.records.iter().map(|r| r.objective))
            .collect()
    }

    pub fn flagged_multimodal(&self) -> bool {
        self.records.iter().any(|r| !r.multimodal_m1.is_empty())
    }
}
