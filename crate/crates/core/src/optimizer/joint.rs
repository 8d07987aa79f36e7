//! Alternating blocklength/location descent with random blocklength perturbations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::blocklength::optimize_blocklength_with;
use super::eval::Evaluator;
use super::location::{optimize_location_with, sign_changes_with};
use super::types::{Candidate, IterationRecord, IterationTrace, Method, Solution, SolverConfig};
use crate::error::Result;
use crate::model::{exact_error, Allocation, ScenarioParams};

/// Starting point for [`joint_optimize`]: hover position and first-hop blocklength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialPoint {
    pub x: f64,
    pub m1: u32,
}

impl InitialPoint {
    /// Midpoint of `[d1, d2]` and `floor(M / 2)`.
    pub fn midpoints(p: &ScenarioParams) -> Self {
        Self {
            x: p.x_mid(),
            m1: (p.total_blocklength / 2).max(1),
        }
    }
}

/// Run the perturbed alternating solver.
///
/// Each outer iteration solves the blocklength split at the current position,
/// draws `n_left` then `n_right` from `1..=n_max`, solves the location for the
/// three blocklengths `m - n_left`, `m`, `m + n_right` (clamped to `[1, M-1]`),
/// and moves to the `(m1, x)` pair with the smallest surrogate error. If all
/// three are worse than the current iterate, the iterate is kept, so the
/// objective never increases.
pub fn joint_optimize(
    p: &ScenarioParams,
    cfg: &SolverConfig,
    init: Option<InitialPoint>,
) -> Result<(Solution, IterationTrace)> {
    p.validate()?;
    cfg.validate()?;
    let total = p.total_blocklength;
    let init = init.unwrap_or_else(|| InitialPoint::midpoints(p));
    let start = Allocation::new(init.m1, total)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut ev = Evaluator::new(p);
    let mut diag = Evaluator::new(p);

    let mut current = Candidate {
        m1: start.m1,
        x: init.x,
        eps_approx: ev.surrogate(init.x, start.m1)?,
    };
    let initial = current;
    let mut records = Vec::with_capacity(cfg.t_max as usize);

    for t in 1..=cfg.t_max {
        let (alloc, _) = optimize_blocklength_with(&mut ev, current.x, cfg)?;
        let m = alloc.m1;
        let n_left = rng.random_range(1..=cfg.n_max);
        let n_right = rng.random_range(1..=cfg.n_max);
        let blocklengths = [
            m.saturating_sub(n_left).max(1),
            m,
            m.saturating_add(n_right).min(total - 1),
        ];

        let mut candidates = [current; 3];
        let mut multimodal_m1 = Vec::new();
        for (slot, &m1) in candidates.iter_mut().zip(&blocklengths) {
            let x = optimize_location_with(&mut ev, m1, cfg)?;
            *slot = Candidate {
                m1,
                x,
                eps_approx: ev.surrogate(x, m1)?,
            };
            if let Some(points) = cfg.unimodality_scan {
                if sign_changes_with(&mut diag, m1, points)? > 1 && !multimodal_m1.contains(&m1) {
                    multimodal_m1.push(m1);
                }
            }
        }

        let mut best = candidates[0];
        for c in &candidates[1..] {
            if c.eps_approx < best.eps_approx {
                best = *c;
            }
        }
        let kept_previous = best.eps_approx > current.eps_approx;
        let previous = current.eps_approx;
        if !kept_previous {
            current = best;
        }

        records.push(IterationRecord {
            iteration: t,
            m1_from_blocklength_step: m,
            n_left,
            n_right,
            candidates,
            selected: current,
            kept_previous,
            objective: current.eps_approx,
            eval_count: ev.count,
            multimodal_m1,
        });

        let change = (previous - current.eps_approx).abs();
        if cfg.early_stop_tol > 0.0 && change <= cfg.early_stop_tol * current.eps_approx.abs() {
            break;
        }
    }

    let allocation = Allocation::new(current.m1, total)?;
    let solution = Solution {
        x: current.x,
        allocation,
        eps_approx: current.eps_approx,
        eps_exact: exact_error(p, current.x, current.m1 as f64)?,
        method: Method::Joint,
        eval_count: ev.count,
        iterations: records.len() as u32,
    };
    let trace = IterationTrace {
        initial,
        records,
        diagnostic_evals: diag.count,
    };
    Ok((solution, trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_scenario_converges_to_centre() {
        let p = ScenarioParams {
            p2_w: 3.0,
            ..ScenarioParams::reference()
        };
        let cfg = SolverConfig::default();
        let (s, _) = joint_optimize(&p, &cfg, None).unwrap();
        assert_eq!(s.allocation, Allocation { m1: 50, m2: 50 });
        assert!((s.x - 100.0).abs() <= cfg.zeta);
    }

    #[test]
    fn trace_is_monotone_and_consistent() {
        let p = ScenarioParams::reference();
        let (s, trace) = joint_optimize(&p, &SolverConfig::with_seed(7), None).unwrap();
        let obj = trace.objectives();
        assert!(obj.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(*obj.last().unwrap(), s.eps_approx);
        assert_eq!(trace.records.len() as u32, s.iterations);
        assert_eq!(trace.records.last().unwrap().eval_count, s.eval_count);
        for r in &trace.records {
            assert!((1..=3).contains(&r.n_left) && (1..=3).contains(&r.n_right));
            assert_eq!(r.candidates[1].m1, r.m1_from_blocklength_step);
        }
        assert!(s.eps_exact <= s.eps_approx);
    }

    #[test]
    fn runs_full_budget_without_early_stop() {
        let p = ScenarioParams::reference();
        let cfg = SolverConfig {
            early_stop_tol: 0.0,
            ..SolverConfig::with_seed(3)
        };
        let (s, trace) = joint_optimize(&p, &cfg, None).unwrap();
        assert_eq!(s.iterations, 10);
        assert_eq!(trace.records.len(), 10);
    }

    #[test]
    fn perturbations_are_clamped_at_the_edges() {
        let p = ScenarioParams {
            total_blocklength: 4,
            bandwidth_hz: None,
            ..ScenarioParams::reference()
        };
        let cfg = SolverConfig {
            early_stop_tol: 0.0,
            ..SolverConfig::default()
        };
        let (s, trace) = joint_optimize(&p, &cfg, None).unwrap();
        for r in &trace.records {
            for c in &r.candidates {
                assert!((1..=3).contains(&c.m1));
            }
        }
        assert_eq!(s.allocation.total(), 4);
    }

    #[test]
    fn explicit_initial_point_is_recorded() {
        let p = ScenarioParams::reference();
        let init = InitialPoint { x: 40.0, m1: 20 };
        let (_, trace) = joint_optimize(&p, &SolverConfig::default(), Some(init)).unwrap();
        assert_eq!((trace.initial.x, trace.initial.m1), (40.0, 20));
        assert!(joint_optimize(
            &p,
            &SolverConfig::default(),
            Some(InitialPoint { x: 40.0, m1: 100 })
        )
        .is_err());
    }

    #[test]
    fn unimodality_scan_is_off_the_main_budget() {
        let p = ScenarioParams::reference();
        let plain = SolverConfig::with_seed(1);
        let scanned = SolverConfig {
            unimodality_scan: Some(101),
            ..plain.clone()
        };
        let (a, _) = joint_optimize(&p, &plain, None).unwrap();
        let (b, tb) = joint_optimize(&p, &scanned, None).unwrap();
        assert_eq!(a, b);
        assert!(tb.diagnostic_evals > 0);
        assert!(!tb.flagged_multimodal());
    }
}
