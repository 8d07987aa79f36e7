//! Self-checks of the model on a scenario: derivatives against finite
//! differences, convexity of the surrogate in the blocklength split, Q-function
//! identities and, for mirror-symmetric scenarios, stationarity at the centre.

use std::fmt;

use relayopt_core::model::{self, approx_error, q_function};
use relayopt_core::optimizer::below_capacity_range;
use relayopt_core::ScenarioParams;

use crate::config::Scenario;
use crate::error::Result;
use crate::fd;

type BlocklengthDerivative = fn(&ScenarioParams, f64, f64) -> relayopt_core::Result<f64>;
type LocationDerivative = fn(&ScenarioParams, f64, f64, f64) -> relayopt_core::Result<f64>;

/// The analytic derivatives under test. Swappable so a deliberately broken
/// one can show that the checks catch it.
#[derive(Clone, Copy)]
pub struct Derivatives {
    pub approx_error_dm1: BlocklengthDerivative,
    pub g_prime: LocationDerivative,
    pub g_second: LocationDerivative,
}

impl Derivatives {
    pub fn analytic() -> Self {
        Self {
            approx_error_dm1: model::approx_error_dm1,
            g_prime: model::g_prime,
            g_second: model::g_second,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn record(&mut self, name: &'static str, failure: Option<String>, ok: String) {
        let passed = failure.is_none();
        self.checks.push(Check {
            name,
            passed,
            detail: failure.unwrap_or(ok),
        });
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            )?;
        }
        Ok(())
    }
}

const SAMPLES: usize = 50;

pub fn verify(scenario: &Scenario) -> Result<VerifyReport> {
    verify_with(scenario, &Derivatives::analytic())
}

pub fn verify_with(scenario: &Scenario, d: &Derivatives) -> Result<VerifyReport> {
    let p = &scenario.params;
    let total = p.total_blocklength;
    let (m1, m2) = ((total / 2) as f64, (total - total / 2) as f64);
    let mut report = VerifyReport::default();

    // Blocklength derivative across the split range, at the middle of the hover range.
    let x_mid = p.x_mid();
    let mut failure = None;
    for m in fd::interior_samples(1.0, (total - 1) as f64, SAMPLES) {
        let a = (d.approx_error_dm1)(p, x_mid, m)?;
        let n = fd::surrogate_dm1(p, x_mid, m)?;
        if !fd::close(a, n, 1e-6, approx_error(p, x_mid, m)?) {
            failure = Some(format!(
                "x = {x_mid}, m1 = {m}: analytic {a:e}, finite difference {n:e}"
            ));
            break;
        }
    }
    report.record(
        "approx_error_dm1",
        failure,
        format!("{SAMPLES} points at x = {x_mid}"),
    );

    // Location derivatives across [0, D] at the even split.
    let xs = fd::interior_samples(0.0, p.distance_m, SAMPLES);
    let mut failure = None;
    for &x in &xs {
        let a = (d.g_prime)(p, x, m1, m2)?;
        let n = fd::g_prime(p, x, m1, m2)?;
        if !fd::close(a, n, 1e-6, 1.0) {
            failure = Some(format!(
                "x = {x}, m1 = {m1}: analytic {a:e}, finite difference {n:e}"
            ));
            break;
        }
    }
    report.record(
        "g_prime",
        failure,
        format!("{SAMPLES} points on [0, {}]", p.distance_m),
    );

    let mut failure = None;
    for &x in &xs {
        let a = (d.g_second)(p, x, m1, m2)?;
        let (n, terms) = fd::g_second(p, x, m1, m2)?;
        // The difference quotient loses about 1e-7 of the terms that cancel in it.
        if (a - n).abs() > 1e-5 * n.abs() + 1e-7 * terms + 1e-12 {
            failure = Some(format!(
                "x = {x}, m1 = {m1}: analytic {a:e}, finite difference {n:e}"
            ));
            break;
        }
    }
    report.record(
        "g_second",
        failure,
        format!("{SAMPLES} points on [0, {}]", p.distance_m),
    );

    let (failure, ok) = convexity(p)?;
    report.record("convexity", failure, ok);

    report.record(
        "q_function",
        q_identities(),
        "complement, centre, quantile, monotone".into(),
    );

    let (failure, ok) = stationarity(p, d)?;
    report.record("stationarity", failure, ok);
    Ok(report)
}

/// Second differences of the surrogate over integer splits that keep both
/// hops below capacity, at 20 hover positions spanning `[d1, d2]`.
fn convexity(p: &ScenarioParams) -> Result<(Option<String>, String)> {
    let n = 20;
    let mut tested = 0;
    for i in 0..n {
        let x = p.x_min_m + (p.x_max_m - p.x_min_m) * i as f64 / (n - 1) as f64;
        let Some((lo, hi)) = below_capacity_range(p, x)? else {
            continue;
        };
        let (lo, hi) = (lo.ceil() as u32, hi.floor() as u32);
        if hi < lo + 2 {
            continue;
        }
        let eps: Vec<f64> = (lo..=hi)
            .map(|m| approx_error(p, x, m as f64))
            .collect::<relayopt_core::Result<_>>()?;
        let max = eps.iter().cloned().fold(0.0, f64::max);
        for (k, w) in eps.windows(3).enumerate() {
            let second = w[0] - 2.0 * w[1] + w[2];
            tested += 1;
            if second < -1e-15 * max {
                let m = lo + k as u32 + 1;
                return Ok((
                    Some(format!("x = {x}, m1 = {m}: second difference {second:e}")),
                    String::new(),
                ));
            }
        }
    }
    Ok((
        None,
        format!("{tested} second differences over below-capacity splits"),
    ))
}

fn q_identities() -> Option<String> {
    if q_function(0.0) != 0.5 {
        return Some(format!("Q(0) = {}", q_function(0.0)));
    }
    let q90 = q_function(1.2815515655446004);
    if (q90 - 0.1).abs() > 1e-12 {
        return Some(format!("Q(1.2815515655446004) = {q90:e}, expected 0.1"));
    }
    let mut last = f64::INFINITY;
    for k in -800..=800 {
        let z = k as f64 * 0.01;
        let (a, b) = (q_function(z), q_function(-z));
        if (a + b - 1.0).abs() > 4.0 * f64::EPSILON {
            return Some(format!("Q({z}) + Q({}) = {:e}", -z, a + b));
        }
        if a > last {
            return Some(format!("Q increases at z = {z}"));
        }
        last = a;
    }
    None
}

/// Both derivatives vanish at the mirror point of a symmetric scenario.
fn stationarity(p: &ScenarioParams, d: &Derivatives) -> Result<(Option<String>, String)> {
    let centre = p.distance_m / 2.0;
    let total = p.total_blocklength;
    let symmetric =
        p.p1_w == p.p2_w && total.is_multiple_of(2) && p.x_min_m <= centre && centre <= p.x_max_m;
    if !symmetric {
        return Ok((None, "skipped, scenario is not mirror-symmetric".into()));
    }
    let half = (total / 2) as f64;
    let dm = (d.approx_error_dm1)(p, centre, half)?;
    let scale = approx_error(p, centre, half)?;
    if dm.abs() > 1e-12 * scale {
        return Ok((
            Some(format!(
                "approx_error_dm1 at x = {centre}, m1 = {half} is {dm:e}"
            )),
            String::new(),
        ));
    }
    let gp = (d.g_prime)(p, centre, half, half)?;
    if gp.abs() > 1e-12 {
        return Ok((
            Some(format!("g_prime at x = {centre}, m1 = {half} is {gp:e}")),
            String::new(),
        ));
    }
    Ok((None, format!("x = {centre}, m1 = m2 = {half}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_scenario_passes() {
        let report = verify(&Scenario::reference()).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.checks.len(), 6);
    }

    #[test]
    fn corrupted_location_derivative_is_named() {
        fn broken(p: &ScenarioParams, x: f64, m1: f64, m2: f64) -> relayopt_core::Result<f64> {
            Ok(model::g_prime(p, x, m1, m2)? * (1.0 + 1e-3))
        }
        let d = Derivatives {
            g_prime: broken,
            ..Derivatives::analytic()
        };
        let report = verify_with(&Scenario::reference(), &d).unwrap();
        let failed: Vec<_> = report.failures().map(|c| c.name).collect();
        assert_eq!(failed, ["g_prime"]);
        assert!(report.to_string().contains("FAIL g_prime: x = "));
    }

    #[test]
    fn symmetric_scenario_is_stationary() {
        let mut s = Scenario::reference();
        s.params.p2_w = s.params.p1_w;
        s.params.x_max_m = 130.0;
        let report = verify(&s).unwrap();
        assert!(report.passed(), "{report}");
        let st = report
            .checks
            .iter()
            .find(|c| c.name == "stationarity")
            .unwrap();
        assert!(st.detail.starts_with("x = 100"), "{}", st.detail);
    }
}
