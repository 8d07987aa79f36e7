//! Gaussian tail probability and density.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// `Q(z) = P(Z > z)` for a standard normal `Z`, via `erfc(z / sqrt 2) / 2`.
///
/// Relative error stays below 1e-12 while the result is a normal double
/// (`z <= 37.5`); beyond that the tail degrades into subnormals and reaches
/// zero near `z = 38.5`.
pub fn q_function(z: f64) -> f64 {
    0.5 * libm::erfc(z * FRAC_1_SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}
