//! Finite-blocklength link model.

mod link;
mod params;
mod qfunc;
mod rate;

pub use link::{
    approx_error, approx_error_dm1, exact_error, g_prime, g_second, g_value, hop_error, hop_errors,
    location_terms, log_surrogate, overall_error, LocationTerms, LogSurrogate,
};
pub use params::{Allocation, Hop, ScenarioParams};
pub use qfunc::{normal_pdf, q_function};
pub use rate::{
    capacity, dispersion, rate_penalty, rate_penalty_dgamma, rate_penalty_dgamma2, rate_penalty_dm,
    rate_penalty_dm2, SNR_FLOOR,
};
