//! Single solver runs.

use std::time::Instant;

use relayopt_core::optimizer::solve;
use relayopt_core::{Method, Solution};

use crate::config::Scenario;
use crate::error::Result;
use crate::table::{fmt_f64, Table};

/// One solver run with the seed it used.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub method: Method,
    pub seed: u64,
    pub solution: Solution,
    /// Wall time, only recorded when asked for since it breaks byte-identical output.
    pub wall_ms: Option<f64>,
}

pub const RUN_COLUMNS: &[&str] = &[
    "method",
    "seed",
    "x",
    "m1",
    "m2",
    "eps_approx",
    "eps_exact",
    "eval_count",
    "iterations",
    "wall_ms",
];

pub fn run_method(
    scenario: &Scenario,
    method: Method,
    seed: u64,
    timing: bool,
) -> Result<RunRecord> {
    let cfg = relayopt_core::SolverConfig {
        seed,
        ..scenario.solver.clone()
    };
    let start = Instant::now();
    let solution = solve(&scenario.params, method, &cfg)?;
    let wall_ms = timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    Ok(RunRecord {
        method,
        seed,
        solution,
        wall_ms,
    })
}

impl RunRecord {
    /// Cells for [`RUN_COLUMNS`].
    pub fn cells(&self) -> Vec<String> {
        let s = &self.solution;
        vec![
            self.method.to_string(),
            self.seed.to_string(),
            fmt_f64(s.x),
            s.allocation.m1.to_string(),
            s.allocation.m2.to_string(),
            fmt_f64(s.eps_approx),
            fmt_f64(s.eps_exact),
            s.eval_count.to_string(),
            s.iterations.to_string(),
            self.wall_ms.map(fmt_f64).unwrap_or_default(),
        ]
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(RUN_COLUMNS);
        t.push(self.cells());
        t
    }

    /// Human-readable summary for the terminal.
    pub fn summary(&self) -> String {
        let s = &self.solution;
        let mut out = format!(
            "method      {}\nseed        {}\nx           {}\nm1          {}\nm2          {}\n\
             eps_approx  {:e}\neps_exact   {:e}\niterations  {}\neval_count  {}\n",
            self.method,
            self.seed,
            s.x,
            s.allocation.m1,
            s.allocation.m2,
            s.eps_approx,
            s.eps_exact,
            s.iterations,
            s.eval_count,
        );
        if let Some(ms) = self.wall_ms {
            out.push_str(&format!("wall_ms     {ms:.3}\n"));
        }
        out
    }
}
