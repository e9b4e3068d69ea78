use thiserror::Error;

/// Errors raised by the library. Every numerical routine that can reject its
/// input reports through this type; no routine panics on bad parameters.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LdpError {
    #[error("{name} = {value} is not a stable coefficient (need |{name}| < 1)")]
    InvalidCoefficient { name: &'static str, value: f64 },

    #[error("need at least {min} observations, got {got}")]
    PathTooShort { min: usize, got: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("p^2 <= 4q^2 (p = {p}, q = {q}): the pivot map has no pair of distinct real fixed points")]
    OutOfCase { p: f64, q: f64 },

    #[error("matrix size {n} exceeds the dense cap {cap}; use the pivot route instead")]
    DenseCapExceeded { n: usize, cap: usize },

    #[error("({x}, {y}) lies outside the set where the rate is finite")]
    OutsideRateDomain { x: f64, y: f64 },

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, LdpError>;
