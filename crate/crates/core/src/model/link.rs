//! Hop and end-to-end error probabilities, the surrogate `eps1 + eps2`, and its
//! derivatives in the blocklength split and in the hover position.

use super::params::{Hop, ScenarioParams};
use super::qfunc::{normal_pdf, q_function};
use super::rate::{rate_penalty, rate_penalty_dgamma, rate_penalty_dgamma2, rate_penalty_dm};
use crate::error::{ModelError, Result};

/// Decoding error of `hop` with `m` symbols and the UAV at `x`.
pub fn hop_error(p: &ScenarioParams, x: f64, m: f64, hop: Hop) -> Result<f64> {
    let gamma = p.snr(x, hop)?;
    Ok(q_function(rate_penalty(gamma, m, p.packet_bits as f64)?))
}

/// End-to-end decode-and-forward error `eps1 + (1 - eps1) eps2`.
pub fn overall_error(eps1: f64, eps2: f64) -> Result<f64> {
    for (what, v) in [("eps1", eps1), ("eps2", eps2)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(ModelError::InvalidProbability { what, value: v });
        }
    }
    Ok(eps1 + (1.0 - eps1) * eps2)
}

fn check_split(p: &ScenarioParams, m1: f64) -> Result<f64> {
    let total = p.total_blocklength as f64;
    if !m1.is_finite() {
        return Err(ModelError::NonFinite {
            what: "m1",
            value: m1,
        });
    }
    if m1 < 1.0 || m1 > total - 1.0 {
        return Err(ModelError::AllocationOutOfRange {
            m1,
            max: p.total_blocklength - 1,
        });
    }
    Ok(total - m1)
}

/// Both hop errors for the split `(m1, M - m1)`.
pub fn hop_errors(p: &ScenarioParams, x: f64, m1: f64) -> Result<(f64, f64)> {
    let m2 = check_split(p, m1)?;
    Ok((
        hop_error(p, x, m1, Hop::First)?,
        hop_error(p, x, m2, Hop::Second)?,
    ))
}

/// Surrogate objective `eps1 + eps2`; exceeds the exact error by `eps1 * eps2`.
pub fn approx_error(p: &ScenarioParams, x: f64, m1: f64) -> Result<f64> {
    let (e1, e2) = hop_errors(p, x, m1)?;
    Ok(e1 + e2)
}

/// Exact end-to-end error for the split `(m1, M - m1)`.
pub fn exact_error(p: &ScenarioParams, x: f64, m1: f64) -> Result<f64> {
    let (e1, e2) = hop_errors(p, x, m1)?;
    overall_error(e1, e2)
}

/// `d eps_i / d m_i = -phi(f) df/dm`.
fn hop_error_dm(p: &ScenarioParams, x: f64, m: f64, hop: Hop) -> Result<f64> {
    let gamma = p.snr(x, hop)?;
    let l = p.packet_bits as f64;
    let f = rate_penalty(gamma, m, l)?;
    Ok(-normal_pdf(f) * rate_penalty_dm(gamma, m, l)?)
}

/// Derivative of the surrogate in a continuous `m1`, with `m2 = M - m1`.
///
/// The second hop enters with a minus sign since `dm2/dm1 = -1`.
pub fn approx_error_dm1(p: &ScenarioParams, x: f64, m1: f64) -> Result<f64> {
    let m2 = check_split(p, m1)?;
    Ok(hop_error_dm(p, x, m1, Hop::First)? - hop_error_dm(p, x, m2, Hop::Second)?)
}

/// One hop's error and its first two derivatives in `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocationTerms {
    pub eps: f64,
    pub d_eps: f64,
    pub d2_eps: f64,
}

pub fn location_terms(p: &ScenarioParams, x: f64, m: f64, hop: Hop) -> Result<LocationTerms> {
    let (gamma, d_gamma, d2_gamma) = p.snr_with_derivatives(x, hop)?;
    let l = p.packet_bits as f64;
    let f = rate_penalty(gamma, m, l)?;
    let f_g = rate_penalty_dgamma(gamma, m, l)?;
    let f_gg = rate_penalty_dgamma2(gamma, m, l)?;
    let phi = normal_pdf(f);
    let eps_g = -phi * f_g;
    let eps_gg = phi * (f * f_g * f_g - f_gg);
    Ok(LocationTerms {
        eps: q_function(f),
        d_eps: eps_g * d_gamma,
        d2_eps: eps_gg * d_gamma * d_gamma + eps_g * d2_gamma,
    })
}

/// `g(x) = ln(eps1 + eps2)` and its first two derivatives, at fixed `(m1, m2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSurrogate {
    pub g: f64,
    pub g_prime: f64,
    pub g_second: f64,
}

pub fn log_surrogate(p: &ScenarioParams, x: f64, m1: f64, m2: f64) -> Result<LogSurrogate> {
    let a = location_terms(p, x, m1, Hop::First)?;
    let b = location_terms(p, x, m2, Hop::Second)?;
    let s = a.eps + b.eps;
    if s <= 0.0 {
        return Err(ModelError::SurrogateUnderflow { x, m1 });
    }
    let s1 = a.d_eps + b.d_eps;
    let s2 = a.d2_eps + b.d2_eps;
    Ok(LogSurrogate {
        g: s.ln(),
        g_prime: s1 / s,
        g_second: (s2 * s - s1 * s1) / (s * s),
    })
}

pub fn g_value(p: &ScenarioParams, x: f64, m1: f64, m2: f64) -> Result<f64> {
    let s = hop_error(p, x, m1, Hop::First)? + hop_error(p, x, m2, Hop::Second)?;
    if s <= 0.0 {
        return Err(ModelError::SurrogateUnderflow { x, m1 });
    }
    Ok(s.ln())
}

/// `g'(x) = (eps1' + eps2') / (eps1 + eps2)`.
pub fn g_prime(p: &ScenarioParams, x: f64, m1: f64, m2: f64) -> Result<f64> {
    let a = location_terms(p, x, m1, Hop::First)?;
    let b = location_terms(p, x, m2, Hop::Second)?;
    let s = a.eps + b.eps;
    if s <= 0.0 {
        return Err(ModelError::SurrogateUnderflow { x, m1 });
    }
    Ok((a.d_eps + b.d_eps) / s)
}

pub fn g_second(p: &ScenarioParams, x: f64, m1: f64, m2: f64) -> Result<f64> {
    Ok(log_surrogate(p, x, m1, m2)?.g_second)
}
