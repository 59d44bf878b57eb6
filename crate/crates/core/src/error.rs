use thiserror::Error;

/// Errors produced by the witness toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("parameter `{name}` out of range: {value} ({reason})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("no NPT witness available: minimal partial-transpose eigenvalue {lambda_min:.3e} is not negative")]
    NotNpt { lambda_min: f64 },

    #[error("operator is not a projector (deviation {deviation:.3e})")]
    NotProjector { deviation: f64 },

    #[error(
        "denominator operator is singular or indefinite (minimal eigenvalue {lambda_min:.3e})"
    )]
    SingularDenominator { lambda_min: f64 },

    #[error("PPT criterion is not decisive for dimensions {n_a}x{n_b}; only 2x2 and 2x3 systems are covered")]
    PptNotDecisive { n_a: usize, n_b: usize },

    #[error("rejection sampling failed after {attempts} attempts (radius {radius})")]
    SamplingFailed { attempts: usize, radius: f64 },

    #[error("estimated p = {p} lies outside [0, 1]; the noise model does not hold")]
    PEstimateOutOfRange { p: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable tag for structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotHermitian { .. } => "not_hermitian",
            Error::OutOfRange { .. } => "out_of_range",
            Error::InvalidState(_) => "invalid_state",
            Error::NotNpt { .. } => "not_npt",
            Error::NotProjector { .. } => "not_projector",
            Error::SingularDenominator { .. } => "singular_denominator",
            Error::PptNotDecisive { .. } => "ppt_not_decisive",
            Error::SamplingFailed { .. } => "sampling_failed",
            Error::PEstimateOutOfRange { .. } => "p_out_of_range",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Parse(_) => "parse",
        }
    }
}
