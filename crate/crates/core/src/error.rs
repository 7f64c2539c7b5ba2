use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("bound profile is nonpositive at n = {n} (value {value})")]
    NonPositiveBound { n: u64, value: f64 },

    #[error("bound profile decreases at n = {n}")]
    NotMonotone { n: u64 },

    #[error("frequencies are not strictly increasing at index {0}")]
    FrequencyOrder(usize),

    #[error(
        "x = {x} lies beyond the system range {limit} and the system has no extrapolation rule"
    )]
    OutOfRange { x: f64, limit: f64 },

    #[error("non-finite data: {0}")]
    NonFinite(String),

    #[error("infeasible coefficient at index {index}: |a| = {modulus} > bound {bound}")]
    Infeasible {
        index: usize,
        modulus: f64,
        bound: f64,
    },

    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e} after {evaluations} evaluations)")]
    Quadrature {
        tol: f64,
        estimate: f64,
        evaluations: usize,
    },

    #[error("s = 1 is a pole of the zeta function")]
    Pole,

    #[error("window support length {support} exceeds the allowed {allowed}")]
    SupportViolation { support: f64, allowed: f64 },

    #[error("decay target too strong for a finite window; best margin {best_margin:e} with K = {best_k}")]
    DecayTooStrong { best_margin: f64, best_k: usize },

    #[error("table parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
