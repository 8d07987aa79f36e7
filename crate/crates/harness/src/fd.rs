//! Finite-difference references for the analytic derivatives.
//!
//! Each hop error is differenced on whichever tail is small (`Q(f)` when
//! `f >= 0`, otherwise `Q(-f) = 1 - eps`) so that saturated hops keep their
//! relative precision, and five-point central stencils are used throughout.

use relayopt_core::model::{q_function, rate_penalty};
use relayopt_core::{Hop, Result, ScenarioParams};

fn small_tail(p: &ScenarioParams, x: f64, m: f64, hop: Hop, sign: f64) -> Result<f64> {
    let gamma = p.snr(x, hop)?;
    Ok(q_function(
        sign * rate_penalty(gamma, m, p.packet_bits as f64)?,
    ))
}

fn tail_sign(p: &ScenarioParams, x: f64, m: f64, hop: Hop) -> Result<f64> {
    let gamma = p.snr(x, hop)?;
    Ok(if rate_penalty(gamma, m, p.packet_bits as f64)? >= 0.0 {
        1.0
    } else {
        -1.0
    })
}

/// Value, first and second derivative of `t` at 0 from a five-point stencil.
fn stencil(t: impl Fn(f64) -> Result<f64>, h: f64) -> Result<(f64, f64, f64)> {
    let (m2, m1, c, p1, p2) = (t(-2.0 * h)?, t(-h)?, t(0.0)?, t(h)?, t(2.0 * h)?);
    let d1 = (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h);
    let d2 = (-p2 + 16.0 * p1 - 30.0 * c + 16.0 * m1 - m2) / (12.0 * h * h);
    Ok((c, d1, d2))
}

/// Derivative of `eps1 + eps2` in `m1` with `m2 = M - m1`.
pub fn surrogate_dm1(p: &ScenarioParams, x: f64, m1: f64) -> Result<f64> {
    let h = 1e-3;
    let total = p.total_blocklength as f64;
    let mut d = 0.0;
    for (hop, m, dir) in [(Hop::First, m1, 1.0), (Hop::Second, total - m1, -1.0)] {
        let s = tail_sign(p, x, m, hop)?;
        d += dir * s * stencil(|dm| small_tail(p, x, m + dm, hop, s), h)?.1;
    }
    Ok(d)
}

fn surrogate_x(p: &ScenarioParams, x: f64, m1: f64, m2: f64, h: f64) -> Result<(f64, f64, f64)> {
    let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
    for (hop, m) in [(Hop::First, m1), (Hop::Second, m2)] {
        let s = tail_sign(p, x, m, hop)?;
        let (mid, a, b) = stencil(|dx| small_tail(p, x + dx, m, hop, s), h)?;
        v += if s > 0.0 { mid } else { 1.0 - mid };
        d1 += s * a;
        d2 += s * b;
    }
    Ok((v, d1, d2))
}

/// `d/dx ln(eps1 + eps2)`.
pub fn g_prime(p: &ScenarioParams, x: f64, m1: f64, m2: f64) -> Result<f64> {
    let (v, d1, _) = surrogate_x(p, x, m1, m2, 1e-3)?;
    Ok(d1 / v)
}

/// `d2/dx2 ln(eps1 + eps2)`, returned with the summed size of the two terms
/// that cancel in it (`|eps''/eps| + (eps'/eps)^2`), which bounds the rounding
/// noise of the difference.
pub fn g_second(p: &ScenarioParams, x: f64, m1: f64, m2: f64) -> Result<(f64, f64)> {
    let (v, d1, d2) = surrogate_x(p, x, m1, m2, 1e-2)?;
    let (a, b) = (d2 / v, (d1 / v) * (d1 / v));
    Ok((a - b, a.abs() + b))
}

/// `|analytic - numeric| <= rel * |numeric|`, falling back to the absolute
/// bound `1e-12 * scale` when the reference itself is that small.
pub fn close(analytic: f64, numeric: f64, rel: f64, scale: f64) -> bool {
    let floor = 1e-12 * scale;
    if numeric.abs() <= floor {
        (analytic - numeric).abs() <= floor
    } else {
        (analytic - numeric).abs() <= rel * numeric.abs()
    }
}

/// Sample points used by the derivative checks: `n` evenly spaced points
/// strictly inside `[lo, hi]`, half a spacing in from each end.
pub fn interior_samples(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let w = (hi - lo) / n as f64;
    (0..n).map(|k| lo + (k as f64 + 0.5) * w).collect()
}
