//! Blocklength split at a fixed hover position.

use super::eval::Evaluator;
use super::types::SolverConfig;
use crate::error::Result;
use crate::model::{capacity, Allocation, Hop, ScenarioParams};

/// Splits `m1` in `[1, M-1]` for which both hops run below capacity
/// (`m1 >= L / C1` and `M - m1 >= L / C2`), or `None` when there are none.
pub fn below_capacity_range(p: &ScenarioParams, x: f64) -> Result<Option<(f64, f64)>> {
    let total = p.total_blocklength as f64;
    let bits = p.packet_bits as f64;
    let lo = (bits / capacity(p.snr(x, Hop::First)?)).max(1.0);
    let hi = (total - bits / capacity(p.snr(x, Hop::Second)?)).min(total - 1.0);
    Ok((lo <= hi).then_some((lo, hi)))
}

/// Best integer split at `x`.
///
/// Bisects `[1, M-1]` down to `cfg.delta`. At each midpoint the rate
/// penalties are checked first: when `f1 + f2 <= 0` the surrogate is at least
/// one and can drift downhill towards a useless end, so the step climbs that
/// sum instead (it is concave in `m1`, so the set where it is positive is a
/// single interval). Elsewhere the sign of the surrogate's derivative decides.
/// The integers either side of the last midpoint and both ends `1`, `M - 1`
/// are then compared; ties go to the smaller `m1`.
pub fn optimize_blocklength(p: &ScenarioParams, x: f64, cfg: &SolverConfig) -> Result<Allocation> {
    p.validate()?;
    cfg.validate()?;
    let mut ev = Evaluator::new(p);
    Ok(optimize_blocklength_with(&mut ev, x, cfg)?.0)
}

pub(crate) fn optimize_blocklength_with(
    ev: &mut Evaluator<'_>,
    x: f64,
    cfg: &SolverConfig,
) -> Result<(Allocation, f64)> {
    let total = ev.params.total_blocklength;
    let clamp = |v: f64| (v as u32).clamp(1, total - 1);
    let (mut lo, mut hi) = (1.0, (total - 1) as f64);
    let mut mid = None;
    while hi - lo > cfg.delta {
        let m = 0.5 * (lo + hi);
        mid = Some(m);
        if ev.blocklength_descends_left(x, m)? {
            hi = m;
        } else {
            lo = m;
        }
    }
    let centre = mid.unwrap_or(0.5 * (lo + hi));
    let mut candidates = vec![1, clamp(centre.floor()), clamp(centre.ceil()), total - 1];
    candidates.sort_unstable();
    candidates.dedup();

    let mut best: Option<(u32, f64)> = None;
    for m1 in candidates {
        let e = ev.surrogate(x, m1)?;
        if best.is_none_or(|(_, b)| e < b) {
            best = Some((m1, e));
        }
    }
    let (m1, e) = best.expect("at least one candidate");
    Ok((Allocation::new(m1, total)?, e))
}
