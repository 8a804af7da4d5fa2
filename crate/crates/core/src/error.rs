use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Parameter on the boundary of a family's domain (score undefined).
    #[error("parameter on the domain boundary: {0}")]
    Boundary(String),

    #[error("infeasible packing: {0}")]
    Infeasible(String),

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("inconsistent bounds: {0}")]
    InconsistentBounds(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI error line.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidDistribution(_) => "invalid_distribution",
            Error::InvalidChannel(_) => "invalid_channel",
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::Boundary(_) => "boundary_parameter",
            Error::Infeasible(_) => "infeasible",
            Error::NonConvergence(_) => "non_convergence",
            Error::InconsistentBounds(_) => "inconsistent_bounds",
            Error::Parse(_) => "parse_error",
            Error::Io(_) => "io_error",
        }
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Checks `dim == expected`.
pub(crate) fn ensure_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
