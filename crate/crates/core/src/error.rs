use thiserror::Error;

/// Errors raised by the LULU library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LuluError {
    #[error("point {x} lies outside the domain [{lo}, {hi}]")]
    OutsideDomain { x: f64, lo: f64, hi: f64 },

    #[error("domains differ: [{0}, {1}] vs [{2}, {3}]")]
    DomainMismatch(f64, f64, f64, f64),

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("law violated: {0}")]
    LawViolation(String),

    #[error("oracle grid too large: {samples} samples exceeds cap {cap}")]
    GridTooLarge { samples: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, LuluError>;
