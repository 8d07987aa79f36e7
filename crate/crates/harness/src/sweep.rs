//! Convergence traces and method comparisons over parameter sweeps.
//!
//! Each sweep point gets its own seed derived from the base seed and the
//! point's position, so the work can be spread over threads and still produce
//! the same rows in the same order.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use relayopt_core::optimizer::joint_optimize;
use relayopt_core::{Method, ScenarioParams, SolverConfig};

use crate::config::Scenario;
use crate::error::{HarnessError, Result};
use crate::run::{run_method, RunRecord};
use crate::table::{fmt_f64, Table};

/// Whether independent sweep points run on the rayon pool or one after another.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

fn map_points<T, R, F>(exec: Execution, items: Vec<T>, f: F) -> Result<Vec<R>>
where
    T: Send,
    R: Send,
    F: Fn(T) -> Result<R> + Sync + Send,
{
    match exec {
        Execution::Serial => items.into_iter().map(f).collect(),
        Execution::Parallel => items.into_par_iter().map(f).collect(),
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for sweep point `param_index`, repetition `repetition`.
pub fn point_seed(base: u64, param_index: u64, repetition: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(base) ^ param_index) ^ repetition)
}

pub const CONVERGENCE_COLUMNS: &[&str] = &["H", "iteration", "eps_approx"];

/// Run the joint solver at each altitude and dump its objective per
/// iteration; iteration 0 is the starting point. All altitudes share `seed`.
pub fn convergence(
    scenario: &Scenario,
    altitudes: &[f64],
    seed: u64,
    exec: Execution,
) -> Result<Table> {
    let cfg = SolverConfig {
        seed,
        ..scenario.solver.clone()
    };
    let traces = map_points(exec, altitudes.to_vec(), |h| {
        let params = ScenarioParams {
            altitude_m: h,
            ..scenario.params.clone()
        };
        let (_, trace) = joint_optimize(&params, &cfg, None)?;
        Ok((h, trace.objectives()))
    })?;
    let mut table = Table::new(CONVERGENCE_COLUMNS);
    for (h, objectives) in traces {
        for (i, obj) in objectives.into_iter().enumerate() {
            table.push(vec![fmt_f64(h), i.to_string(), fmt_f64(obj)]);
        }
    }
    Ok(table)
}

/// Scenario parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    H,
    M,
    L,
    P1,
    P2,
    D,
}

impl SweepParam {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepParam::H => "H",
            SweepParam::M => "M",
            SweepParam::L => "L",
            SweepParam::P1 => "P1",
            SweepParam::P2 => "P2",
            SweepParam::D => "D",
        }
    }

    /// `params` with this parameter set to `value`. Blocklength and packet
    /// size must be whole numbers; setting M drops the bandwidth/latency pair.
    pub fn apply(&self, params: &ScenarioParams, value: f64) -> Result<ScenarioParams> {
        let whole = |what: &str| -> Result<u32> {
            if value.fract() == 0.0 && value >= 1.0 && value <= u32::MAX as f64 {
                Ok(value as u32)
            } else {
                Err(HarnessError::Usage(format!(
                    "{what} must be a positive whole number, got {value}"
                )))
            }
        };
        let mut p = params.clone();
        match self {
            SweepParam::H => p.altitude_m = value,
            SweepParam::M => {
                p.total_blocklength = whole("M")?;
                p.bandwidth_hz = None;
                p.latency_s = None;
            }
            SweepParam::L => p.packet_bits = whole("L")?,
            SweepParam::P1 => p.p1_w = value,
            SweepParam::P2 => p.p2_w = value,
            SweepParam::D => p.distance_m = value,
        }
        p.validate()?;
        Ok(p)
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepParam {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "H" => SweepParam::H,
            "M" => SweepParam::M,
            "L" => SweepParam::L,
            "P1" => SweepParam::P1,
            "P2" => SweepParam::P2,
            "D" => SweepParam::D,
            other => {
                return Err(HarnessError::Usage(format!(
                    "unknown sweep parameter `{other}`"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub values: Vec<f64>,
    pub methods: Vec<Method>,
    pub repetitions: u32,
}

impl Default for SweepSpec {
    /// Every method over `M = 60, 70, ..., 140`, once each.
    fn default() -> Self {
        Self {
            param: SweepParam::M,
            values: (6..=14).map(|k| (10 * k) as f64).collect(),
            methods: Method::ALL.to_vec(),
            repetitions: 1,
        }
    }
}

impl SweepSpec {
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // negated so NaN is rejected
    pub fn validate(&self) -> Result<()> {
        let usage = |m: &str| Err(HarnessError::Usage(m.to_string()));
        if self.values.is_empty() {
            return usage("sweep needs at least one value");
        }
        if self.values.windows(2).any(|w| !(w[0] < w[1])) {
            return usage("sweep values must be strictly increasing");
        }
        if self.methods.is_empty() {
            return usage("sweep needs at least one method");
        }
        if self.repetitions < 1 {
            return usage("repetitions must be at least 1");
        }
        Ok(())
    }
}

pub const COMPARE_COLUMNS: &[&str] = &[
    "param",
    "value",
    "method",
    "repetition",
    "seed",
    "x",
    "m1",
    "m2",
    "eps_approx",
    "eps_exact",
    "eval_count",
    "iterations",
    "wall_ms",
    "flag",
];

/// Flag written on joint rows whose surrogate exceeds the exhaustive one.
pub const JOINT_ABOVE_EXHAUSTIVE: &str = "joint_above_exhaustive";

/// Relative slack before a joint row is flagged.
pub const FLAG_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy)]
struct Point {
    index: usize,
    value: f64,
    method: Method,
    repetition: u32,
}

/// Run every requested method at every sweep point. Rows are ordered by
/// (value, method, repetition) regardless of `exec`.
pub fn compare(
    scenario: &Scenario,
    sweep: &SweepSpec,
    seed: u64,
    exec: Execution,
    timing: bool,
) -> Result<Table> {
    sweep.validate()?;
    let mut points = Vec::new();
    for (index, &value) in sweep.values.iter().enumerate() {
        for &method in &sweep.methods {
            for repetition in 0..sweep.repetitions {
                points.push(Point {
                    index,
                    value,
                    method,
                    repetition,
                });
            }
        }
    }
    let mut records = map_points(exec, points, |pt| {
        let params = sweep.param.apply(&scenario.params, pt.value)?;
        let scn = Scenario {
            params,
            solver: scenario.solver.clone(),
        };
        let s = point_seed(seed, pt.index as u64, pt.repetition as u64);
        Ok((pt, run_method(&scn, pt.method, s, timing)?))
    })?;
    records.sort_by_key(|(pt, _)| (pt.index, pt.method, pt.repetition));

    let exhaustive = |index: usize, repetition: u32| {
        records
            .iter()
            .find(|(p, _)| {
                p.index == index && p.repetition == repetition && p.method == Method::Exhaustive
            })
            .map(|(_, r)| r.solution.eps_approx)
    };
    let mut table = Table::new(COMPARE_COLUMNS);
    for (pt, rec) in &records {
        let flag = match (pt.method, exhaustive(pt.index, pt.repetition)) {
            (Method::Joint, Some(ex)) if joint_above(rec, ex) => JOINT_ABOVE_EXHAUSTIVE,
            _ => "",
        };
        let mut row = vec![
            sweep.param.to_string(),
            fmt_f64(pt.value),
            rec.method.to_string(),
            pt.repetition.to_string(),
        ];
        row.extend(rec.cells().into_iter().skip(1));
        row.push(flag.to_string());
        table.push(row);
    }
    Ok(table)
}

fn joint_above(rec: &RunRecord, exhaustive: f64) -> bool {
    rec.solution.eps_approx - exhaustive > FLAG_TOLERANCE * exhaustive.abs()
}
