use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{solver} did not converge within {iterations} iterations")]
    NonConvergence { solver: &'static str, iterations: usize },

    #[error("inner solver failed: {0}")]
    InnerSolverFailure(String),

    #[error("no sign change found for {what} up to {limit:e}")]
    BracketFailure { what: &'static str, limit: f64 },

    #[error("scheme {0} is not supported here")]
    UnsupportedScheme(crate::channel::SchemeId),

    #[error("rate region has no feasible vertex")]
    DegenerateRegion,

    #[error("rate region is unbounded in the sum-rate direction")]
    UnboundedRegion,

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code: 2 for bad input or configuration, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) | Self::InvalidChannel(_) | Self::InvalidParameter(_) | Self::UnsupportedScheme(_) => 2,
            _ => 1,
        }
    }
}
