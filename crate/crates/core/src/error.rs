use thiserror::Error;

/// Errors raised by the operator, protocol and bound routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("capacity exceeded: dimension {requested} is above the cap of {cap}")]
    Capacity { requested: u128, cap: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("site {site} is out of range for a register of {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("operator is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("outside the validity range: {0}")]
    OutOfValidity(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
