//! `g(x) = ln(eps1 + eps2)` and its derivatives along the hover range.

use relayopt_core::model::log_surrogate;
use relayopt_core::Allocation;

use crate::config::Scenario;
use crate::error::{HarnessError, Result};
use crate::table::{fmt_f64, Table};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandscapeSpec {
    pub allocation: Allocation,
    pub x_min: f64,
    pub x_max: f64,
    pub step: f64,
}

impl LandscapeSpec {
    /// Even split over `[0, D]` with a 0.1 m step.
    pub fn default_for(scenario: &Scenario) -> Self {
        let total = scenario.params.total_blocklength;
        Self {
            allocation: Allocation {
                m1: total / 2,
                m2: total - total / 2,
            },
            x_min: 0.0,
            x_max: scenario.params.distance_m,
            step: 0.1,
        }
    }

    /// Grid `x_min + k * step`, snapping the last point onto `x_max` when it
    /// lands within rounding of it.
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // negated so NaN is rejected
    pub fn grid(&self) -> Result<Vec<f64>> {
        if !(self.x_min < self.x_max) || !(self.step > 0.0) || !self.x_max.is_finite() {
            return Err(HarnessError::Usage(format!(
                "landscape needs x_min < x_max and step > 0, got [{}, {}] step {}",
                self.x_min, self.x_max, self.step
            )));
        }
        let span = (self.x_max - self.x_min) / self.step;
        let n = (span + 1e-9).floor() as usize;
        let mut xs: Vec<f64> = (0..=n).map(|k| self.x_min + k as f64 * self.step).collect();
        if (span - n as f64).abs() <= 1e-9 {
            *xs.last_mut().expect("non-empty") = self.x_max;
        }
        Ok(xs)
    }
}

pub const LANDSCAPE_COLUMNS: &[&str] = &["x", "g", "g_prime", "g_second"];

pub fn landscape(scenario: &Scenario, spec: &LandscapeSpec) -> Result<Table> {
    let total = scenario.params.total_blocklength;
    Allocation::new(spec.allocation.m1, total)?;
    if spec.allocation.total() != total {
        return Err(HarnessError::Usage(format!(
            "m1 + m2 must equal M = {total}"
        )));
    }
    let (m1, m2) = (spec.allocation.m1 as f64, spec.allocation.m2 as f64);
    let mut table = Table::new(LANDSCAPE_COLUMNS);
    for x in spec.grid()? {
        let s = log_surrogate(&scenario.params, x, m1, m2)?;
        table.push(vec![
            fmt_f64(x),
            fmt_f64(s.g),
            fmt_f64(s.g_prime),
            fmt_f64(s.g_second),
        ]);
    }
    Ok(table)
}

/// Grid points where `values` changes sign, as `(x_before, x_after)` pairs.
/// Exact zeros are skipped over.
pub fn sign_changes(xs: &[f64], values: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    for (&x, &v) in xs.iter().zip(values) {
        if v == 0.0 || v.is_nan() {
            continue;
        }
        if let Some((lx, lv)) = last {
            if lv.signum() != v.signum() {
                out.push((lx, x));
            }
        }
        last = Some((x, v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_both_ends() {
        let spec = LandscapeSpec::default_for(&Scenario::reference());
        let xs = spec.grid().unwrap();
        assert_eq!(xs.len(), 2001);
        assert_eq!(xs[0], 0.0);
        assert_eq!(*xs.last().unwrap(), 200.0);
    }

    #[test]
    fn sign_change_pairs() {
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0];
        assert_eq!(
            sign_changes(&xs, &[-1.0, 0.0, 2.0, 1.0, -3.0]),
            vec![(0.0, 2.0), (3.0, 4.0)]
        );
    }

    #[test]
    fn rejects_bad_range() {
        let mut spec = LandscapeSpec::default_for(&Scenario::reference());
        spec.step = 0.0;
        assert!(landscape(&Scenario::reference(), &spec).is_err());
    }
}
