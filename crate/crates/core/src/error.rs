use thiserror::Error;

/// Errors raised while building vectors or evaluating norms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NormError {
    #[error("invalid vector: {0}")]
    InvalidVector(String),

    #[error("restriction window is empty: start {start} exceeds end {end}")]
    EmptyWindow { start: usize, end: usize },

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("norm `{norm}` lacks the required property: {property}")]
    MissingProperty {
        norm: String,
        property: &'static str,
    },

    #[error("sign-enumeration too large: support {support} exceeds cap {cap}")]
    SignEnumerationTooLarge { support: usize, cap: usize },

    #[error("tail not summable for `{0}`")]
    TailNotSummable(String),

    #[error("optimizer did not converge: value lies in [{lower}, {upper}]")]
    NonConvergence { lower: f64, upper: f64 },

    #[error("norm value is an enclosure [{lo}, {hi}], not an exact value")]
    NotExact { lo: f64, hi: f64 },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, NormError>;
