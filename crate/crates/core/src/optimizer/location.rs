//! Hover position at a fixed blocklength split.

use super::eval::Evaluator;
use super::types::SolverConfig;
use crate::error::Result;
use crate::model::{Allocation, ScenarioParams};

/// Bisect `g'(x)` on `[d1, d2]` down to `cfg.zeta` and return the bracket midpoint.
///
/// Returns `d2` if `g'(d2) < 0` and `d1` if `g'(d1) > 0`.
pub fn optimize_location(p: &ScenarioParams, alloc: Allocation, cfg: &SolverConfig) -> Result<f64> {
    p.validate()?;
    cfg.validate()?;
    Allocation::new(alloc.m1, p.total_blocklength)?;
    let mut ev = Evaluator::new(p);
    optimize_location_with(&mut ev, alloc.m1, cfg)
}

pub(crate) fn optimize_location_with(
    ev: &mut Evaluator<'_>,
    m1: u32,
    cfg: &SolverConfig,
) -> Result<f64> {
    let (d1, d2) = (ev.params.x_min_m, ev.params.x_max_m);
    if ev.g_prime(d2, m1)? < 0.0 {
        return Ok(d2);
    }
    if ev.g_prime(d1, m1)? > 0.0 {
        return Ok(d1);
    }
    let (mut lo, mut hi) = (d1, d2);
    while hi - lo > cfg.zeta {
        let mid = 0.5 * (lo + hi);
        if ev.g_prime(mid, m1)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Number of sign changes of `g'` over `points` evenly spaced positions on
/// `[d1, d2]`. Zeros are skipped.
pub fn g_prime_sign_changes(p: &ScenarioParams, m1: u32, points: usize) -> Result<usize> {
    let mut ev = Evaluator::new(p);
    sign_changes_with(&mut ev, m1, points)
}

pub(crate) fn sign_changes_with(ev: &mut Evaluator<'_>, m1: u32, points: usize) -> Result<usize> {
    let (d1, d2) = (ev.params.x_min_m, ev.params.x_max_m);
    let step = (d2 - d1) / (points.max(2) - 1) as f64;
    let mut changes = 0;
    let mut last = 0.0f64;
    for i in 0..points.max(2) {
        let v = ev.g_prime(d1 + i as f64 * step, m1)?;
        if v != 0.0 {
            if last != 0.0 && v.signum() != last.signum() {
                changes += 1;
            }
            last = v;
        }
    }
    Ok(changes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::approx_error;

    #[test]
    fn symmetric_scenario_centres() {
        let p = ScenarioParams {
            p2_w: 3.0,
            ..ScenarioParams::reference()
        };
        let cfg = SolverConfig::default();
        let x = optimize_location(&p, Allocation { m1: 50, m2: 50 }, &cfg).unwrap();
        assert!((x - 100.0).abs() <= cfg.zeta, "{x}");
    }

    #[test]
    fn reference_even_split_sits_on_upper_bound() {
        let p = ScenarioParams::reference();
        let x =
            optimize_location(&p, Allocation { m1: 50, m2: 50 }, &SolverConfig::default()).unwrap();
        assert_eq!(x, 130.0);
    }

    #[test]
    fn lower_bound_return() {
        // A strong second hop pulls the optimum left of d1.
        let p = ScenarioParams {
            p1_w: 0.5,
            p2_w: 5.0,
            ..ScenarioParams::reference()
        };
        let a = Allocation::new(50, 100).unwrap();
        assert!(crate::model::g_prime(&p, 30.0, 50.0, 50.0).unwrap() > 0.0);
        assert_eq!(
            optimize_location(&p, a, &SolverConfig::default()).unwrap(),
            30.0
        );
    }

    #[test]
    fn interior_optimum_is_near_grid_minimum() {
        let p = ScenarioParams::reference();
        let cfg = SolverConfig::default();
        let a = Allocation::new(38, 100).unwrap();
        let x = optimize_location(&p, a, &cfg).unwrap();
        assert!(x > 100.0 && x < 110.0, "{x}");
        let grid_min = (0..=10_000)
            .map(|i| approx_error(&p, 30.0 + i as f64 * 0.01, 38.0).unwrap())
            .fold(f64::INFINITY, f64::min);
        let e = approx_error(&p, x, 38.0).unwrap();
        assert!(e >= grid_min * (1.0 - 1e-12));
        assert!((e - grid_min) / grid_min < 1e-4);
    }

    #[test]
    fn reference_landscape_unimodal_on_feasible_interval() {
        let p = ScenarioParams::reference();
        for m1 in [30, 38, 43, 50, 60] {
            assert!(g_prime_sign_changes(&p, m1, 201).unwrap() <= 1, "m1 = {m1}");
        }
    }
}
