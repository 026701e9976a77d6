use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval [{lo}, {hi}]: bounds must be finite with lo <= hi")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("negative scalar {0}: only nonnegative scaling is supported")]
    NegativeScalar(f64),

    #[error("negative operand {0}: product requires nonnegative intervals")]
    NegativeOperand(String),

    #[error("parse error at position {pos}: {message}")]
    Parse { pos: usize, message: String },

    #[error("point ({x}, {y}) lies outside the domain {domain}")]
    Domain { x: f64, y: f64, domain: String },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("endpoint order violated at {at}: lower {lower} > upper {upper}")]
    EndpointOrder { at: String, lower: f64, upper: f64 },

    #[error("non-finite value {value} at {at}")]
    NonFinite { at: String, value: f64 },

    #[error("domain mismatch: {0} vs {1}")]
    DomainMismatch(String, String),

    #[error("unknown catalog entry '{0}'")]
    UnknownCatalogEntry(String),

    #[error("catalog entry '{name}' is {found}, expected {expected}")]
    CatalogArity { name: String, found: &'static str, expected: &'static str },

    #[error("quadrature did not reach tolerance {tolerance}: last refinement distance {distance}")]
    QuadratureDivergence { tolerance: f64, distance: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("h(1/2) = 0 for {0}")]
    HZeroAtHalf(String),

    #[error("invalid h function {label}: {reason}")]
    InvalidH { label: String, reason: String },

    #[error("scalar mode requires point-interval inputs; {0} is not degenerate")]
    NotDegenerate(String),

    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
