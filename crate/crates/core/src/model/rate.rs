//! Normal-approximation rate penalty `f(gamma, m, L)` and its partial derivatives.
//!
//! `f = ln2 * sqrt(m / V) * (log2(1 + gamma) - L / m)` with dispersion
//! `V = 1 - (1 + gamma)^-2`. Blocklength `m` is real-valued here; integrality
//! is imposed by the solvers.

use std::f64::consts::LN_2;

use crate::error::{ModelError, Result};

/// SNRs below this are rejected: the dispersion vanishes and `f` blows up.
pub const SNR_FLOOR: f64 = 1e-12;

fn check_snr(gamma: f64) -> Result<()> {
    if !gamma.is_finite() {
        return Err(ModelError::NonFinite {
            what: "gamma",
            value: gamma,
        });
    }
    if gamma < SNR_FLOOR {
        return Err(ModelError::SnrBelowFloor {
            gamma,
            floor: SNR_FLOOR,
        });
    }
    Ok(())
}

fn check_blocklength(m: f64) -> Result<()> {
    if !m.is_finite() {
        return Err(ModelError::NonFinite {
            what: "m",
            value: m,
        });
    }
    if m < 1.0 {
        return Err(ModelError::BlocklengthTooSmall { m });
    }
    Ok(())
}

/// Channel dispersion `1 - (1 + gamma)^-2`.
pub fn dispersion(gamma: f64) -> Result<f64> {
    check_snr(gamma)?;
    let r = 1.0 + gamma;
    Ok(1.0 - 1.0 / (r * r))
}

/// Capacity `log2(1 + gamma)` in bits per symbol.
pub fn capacity(gamma: f64) -> f64 {
    gamma.ln_1p() / LN_2
}

pub fn rate_penalty(gamma: f64, m: f64, packet_bits: f64) -> Result<f64> {
    check_blocklength(m)?;
    let v = dispersion(gamma)?;
    Ok(LN_2 * (m / v).sqrt() * (capacity(gamma) - packet_bits / m))
}

/// `df/dgamma = sqrt(m) * (1 - ln2 (C - L/m) / w) / sqrt(w)` with `w = (1+gamma)^2 - 1`.
pub fn rate_penalty_dgamma(gamma: f64, m: f64, packet_bits: f64) -> Result<f64> {
    check_blocklength(m)?;
    check_snr(gamma)?;
    let w = excess(gamma);
    let gap = capacity(gamma) - packet_bits / m;
    Ok(m.sqrt() * (1.0 - LN_2 * gap / w) / w.sqrt())
}

/// `d2f/dgamma2 = c ((-1/(1+gamma) - (1+gamma)) w + 3 (1+gamma) (C - L/m) ln2)`,
/// `c = sqrt(m) / w^(5/2)`.
pub fn rate_penalty_dgamma2(gamma: f64, m: f64, packet_bits: f64) -> Result<f64> {
    check_blocklength(m)?;
    check_snr(gamma)?;
    let r = 1.0 + gamma;
    let w = excess(gamma);
    let c = m.sqrt() / w.powf(2.5);
    let gap = capacity(gamma) - packet_bits / m;
    Ok(c * (-1.0 / r - r) * w + 3.0 * c * r * gap * LN_2)
}

/// `(1 + gamma)^2 - 1`, written to stay accurate for small gamma.
fn excess(gamma: f64) -> f64 {
    gamma * (2.0 + gamma)
}

/// `A = ln2 / sqrt(V)` and `C = log2(1 + gamma)` so that `f = A sqrt(m) (C - L/m)`.
fn blocklength_constants(gamma: f64) -> Result<(f64, f64)> {
    Ok((LN_2 / dispersion(gamma)?.sqrt(), capacity(gamma)))
}

/// `df/dm = A C m^-1/2 / 2 + A L m^-3/2 / 2`.
pub fn rate_penalty_dm(gamma: f64, m: f64, packet_bits: f64) -> Result<f64> {
    check_blocklength(m)?;
    let (a, c) = blocklength_constants(gamma)?;
    Ok(0.5 * a * c / m.sqrt() + 0.5 * a * packet_bits * m.powf(-1.5))
}

/// `d2f/dm2 = -A C m^-3/2 / 4 - 3 A L m^-5/2 / 4`, negative for every valid input.
pub fn rate_penalty_dm2(gamma: f64, m: f64, packet_bits: f64) -> Result<f64> {
    check_blocklength(m)?;
    let (a, c) = blocklength_constants(gamma)?;
    Ok(-0.25 * a * c * m.powf(-1.5) - 0.75 * a * packet_bits * m.powf(-2.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispersion_values() {
        assert_eq!(dispersion(1.0).unwrap(), 0.75);
        assert_eq!(dispersion(3.0).unwrap(), 0.9375);
        assert!((dispersion(1e9).unwrap() - 1.0).abs() < 1e-15);
        assert!(dispersion(0.0).is_err());
        assert!(dispersion(-1.0).is_err());
        assert!(dispersion(1e-13).is_err());
    }

    #[test]
    fn rate_gap_zero() {
        assert_eq!(rate_penalty(3.0, 50.0, 100.0).unwrap(), 0.0);
    }

    #[test]
    fn rate_penalty_hand_value() {
        let f = rate_penalty(3.0, 100.0, 100.0).unwrap();
        let expected = LN_2 * (100.0f64 / 0.9375).sqrt();
        assert!((f - expected).abs() < 1e-14);
        assert!((f - 7.158_793_298_078_116).abs() < 1e-12);
    }

    #[test]
    fn above_capacity_is_negative() {
        for &(g, m) in &[(0.5, 10.0), (3.0, 49.0), (20.0, 20.0)] {
            assert!(rate_penalty(g, m, 100.0).unwrap() < 0.0, "gamma {g}, m {m}");
        }
    }

    #[test]
    fn blocklength_below_one_rejected() {
        assert!(rate_penalty(3.0, 0.5, 100.0).is_err());
        assert!(rate_penalty_dm(3.0, f64::NAN, 100.0).is_err());
    }

    #[test]
    fn blocklength_second_derivative_negative() {
        for gi in 1..=40 {
            let gamma = 0.05 * (gi * gi) as f64;
            for mi in 1..=60 {
                let m = mi as f64 * 3.3;
                if m < 1.0 {
                    continue;
                }
                for &l in &[1.0, 50.0, 100.0, 400.0] {
                    assert!(rate_penalty_dm2(gamma, m, l).unwrap() < 0.0);
                }
            }
        }
    }

    fn central(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn gamma_derivatives_match_differences() {
        for &gamma in &[0.3, 1.0, 3.47, 9.6, 20.8] {
            for &m in &[10.0, 43.0, 90.0] {
                let f = |g: f64| rate_penalty(g, m, 100.0).unwrap();
                let d = |g: f64| rate_penalty_dgamma(g, m, 100.0).unwrap();
                let h = 1e-5 * gamma;
                let fd1 = central(f, gamma, h);
                let fd2 = central(d, gamma, h);
                let a1 = d(gamma);
                let a2 = rate_penalty_dgamma2(gamma, m, 100.0).unwrap();
                assert!(
                    (a1 - fd1).abs() <= 1e-7 * a1.abs().max(1e-3),
                    "{gamma} {m}: {a1} vs {fd1}"
                );
                assert!(
                    (a2 - fd2).abs() <= 1e-6 * a2.abs().max(1e-3),
                    "{gamma} {m}: {a2} vs {fd2}"
                );
            }
        }
    }

    #[test]
    fn blocklength_derivatives_match_differences() {
        for &gamma in &[0.7, 3.0, 20.8] {
            for &m in &[5.0, 50.0, 95.0] {
                let f = |x: f64| rate_penalty(gamma, x, 100.0).unwrap();
                let d = |x: f64| rate_penalty_dm(gamma, x, 100.0).unwrap();
                let fd1 = central(f, m, 1e-4);
                let fd2 = central(d, m, 1e-4);
                let a1 = d(m);
                let a2 = rate_penalty_dm2(gamma, m, 100.0).unwrap();
                assert!((a1 - fd1).abs() <= 1e-7 * a1.abs(), "{a1} vs {fd1}");
                assert!((a2 - fd2).abs() <= 1e-6 * a2.abs(), "{a2} vs {fd2}");
            }
        }
    }
}
