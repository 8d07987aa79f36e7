use thiserror::Error;

/// Failures raised by the link model and the solvers built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("SNR {gamma:e} is below the model floor {floor:e}")]
    SnrBelowFloor { gamma: f64, floor: f64 },

    #[error("blocklength {m} must be at least 1")]
    BlocklengthTooSmall { m: f64 },

    #[error("m1 = {m1} outside the feasible range [1, {max}]")]
    AllocationOutOfRange { m1: f64, max: u32 },

    #[error("probability {what} = {value} outside [0, 1]")]
    InvalidProbability { what: &'static str, value: f64 },

    #[error("surrogate error underflowed to zero at x = {x}, m1 = {m1}; ln is undefined")]
    SurrogateUnderflow { x: f64, m1: f64 },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, ModelError>;
