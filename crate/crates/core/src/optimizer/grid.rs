//! Exhaustive grid oracle and the single-variable baselines.

use super::blocklength::optimize_blocklength_with;
use super::eval::Evaluator;
use super::location::optimize_location_with;
use super::types::{Method, Solution, SolverConfig};
use crate::error::Result;
use crate::model::{approx_error, exact_error, Allocation, ScenarioParams};

/// `d1, d1 + zeta, ...` up to `d2`; `d2` is always the last point.
pub fn location_grid(p: &ScenarioParams, zeta: f64) -> Vec<f64> {
    let (d1, d2) = (p.x_min_m, p.x_max_m);
    let steps = ((d2 - d1) / zeta + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=steps).map(|k| d1 + k as f64 * zeta).collect();
    let last = grid.last_mut().expect("non-empty grid");
    if d2 - *last <= 1e-9 * zeta {
        *last = d2;
    } else {
        grid.push(d2);
    }
    grid
}

fn solution(
    p: &ScenarioParams,
    x: f64,
    m1: u32,
    method: Method,
    eval_count: u64,
) -> Result<Solution> {
    Ok(Solution {
        x,
        allocation: Allocation::new(m1, p.total_blocklength)?,
        eps_approx: approx_error(p, x, m1 as f64)?,
        eps_exact: exact_error(p, x, m1 as f64)?,
        method,
        eval_count,
        iterations: 0,
    })
}

/// Grid minimizer of the surrogate over every `m1` in `[1, M-1]` and every
/// point of [`location_grid`]. Ties keep the first point in `(m1, x)` order.
pub fn exhaustive_search(p: &ScenarioParams, cfg: &SolverConfig) -> Result<Solution> {
    p.validate()?;
    cfg.validate()?;
    let grid = location_grid(p, cfg.zeta);
    let mut ev = Evaluator::new(p);
    let mut best = (1, grid[0], f64::INFINITY);
    for m1 in 1..p.total_blocklength {
        for &x in &grid {
            let e = ev.surrogate(x, m1)?;
            if e < best.2 {
                best = (m1, x, e);
            }
        }
    }
    solution(p, best.1, best.0, Method::Exhaustive, ev.count)
}

/// Best blocklength split with the UAV fixed at `(d1 + d2) / 2`.
pub fn baseline_fixed_x(p: &ScenarioParams, cfg: &SolverConfig) -> Result<Solution> {
    p.validate()?;
    cfg.validate()?;
    let x = p.x_mid();
    let mut ev = Evaluator::new(p);
    let (alloc, _) = optimize_blocklength_with(&mut ev, x, cfg)?;
    solution(p, x, alloc.m1, Method::FixedX, ev.count)
}

/// Best hover position with the even split `m1 = floor(M / 2)`.
pub fn baseline_fixed_m(p: &ScenarioParams, cfg: &SolverConfig) -> Result<Solution> {
    p.validate()?;
    cfg.validate()?;
    let m1 = p.total_blocklength / 2;
    let mut ev = Evaluator::new(p);
    let x = optimize_location_with(&mut ev, m1, cfg)?;
    solution(p, x, m1, Method::FixedM, ev.count)
}
