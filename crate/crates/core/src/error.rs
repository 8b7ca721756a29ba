use thiserror::Error;

/// Errors produced by the objective, linear-algebra and optimizer layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("matrix is not symmetric (relative asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("duplicate monomial with exponents {0:?}")]
    DuplicateMonomial(Vec<u32>),

    #[error("monomial degree {degree} exceeds the configured maximum {max}")]
    DegreeTooHigh { degree: u32, max: u32 },

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("direction sampler gave up after {retries} draws; the sampler constant B is too small for this tensor")]
    SamplerExhausted { retries: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed polynomial: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
