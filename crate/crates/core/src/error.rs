use thiserror::Error;

/// Errors raised by the radar and photon-budget models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the model.
    #[error("domain error: {name} = {value} ({reason})")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The source correlation never exceeds the detection threshold, so no
    /// positive range satisfies the detection condition.
    #[error("undetectable: rho0 = {rho0} does not exceed rho_th = {rho_th}")]
    Undetectable { rho0: f64, rho_th: f64 },

    /// An iterative solver failed to reach its tolerance.
    #[error("solver failed to converge: {0}")]
    Solver(String),

    /// Input data is degenerate for the requested estimator.
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        reason,
    }
}

/// Fails unless `value` is finite and strictly positive.
pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(domain(name, value, "must be finite and > 0"))
    }
}

/// Fails unless `value` is finite and non-negative.
pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(domain(name, value, "must be finite and >= 0"))
    }
}
