use thiserror::Error;

/// Errors raised by the matrix kernels, graph analysis, model assembly and
/// the update dynamics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("entry ({row}, {col}) is negative: {value}")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        found: usize,
    },

    #[error(
        "power iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("matrix is singular: pivot {pivot:e} at elimination step {step}")]
    SingularMatrix { step: usize, pivot: f64 },

    #[error("vertex set is not a single strongly connected component")]
    NotStronglyConnected,

    #[error("damping factor {0} is outside (0, 1)")]
    BadDamping(f64),

    #[error(
        "spectral radius estimate {0} is not below one; the open model has no finite equilibrium"
    )]
    SpectralRadiusNotLessThanOne(f64),

    #[error("the agent graph has no out-root")]
    NoOutRoot,

    #[error("network violates a modelling assumption: {0}")]
    AssumptionViolated(&'static str),

    #[error("invalid simulation options: {0}")]
    InvalidOptions(&'static str),

    #[error("trace would record {0} values, above the limit of 1000000")]
    TraceTooLarge(usize),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),
}

impl Error {
    /// Stable variant name, used on diagnostic streams.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NegativeEntry { .. } => "NegativeEntry",
            Error::NonFinite(_) => "NonFinite",
            Error::NotSquare { .. } => "NotSquare",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::SingularMatrix { .. } => "SingularMatrix",
            Error::NotStronglyConnected => "NotStronglyConnected",
            Error::BadDamping(_) => "BadDamping",
            Error::SpectralRadiusNotLessThanOne(_) => "SpectralRadiusNotLessThanOne",
            Error::NoOutRoot => "NoOutRoot",
            Error::AssumptionViolated(_) => "AssumptionViolated",
            Error::InvalidOptions(_) => "InvalidOptions",
            Error::TraceTooLarge(_) => "TraceTooLarge",
            Error::InvalidNetwork(_) => "InvalidNetwork",
        }
    }

    pub(crate) fn dims(context: impl Into<String>, expected: usize, found: usize) -> Self {
        Error::DimensionMismatch {
            context: context.into(),
            expected,
            found,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
