use thiserror::Error;

/// Errors produced by the channel model, analytics, and Monte-Carlo engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// All channel gains are zero; every performance metric is undefined.
    #[error("degenerate channel: {0}")]
    DegenerateChannel(String),

    /// Requested operating point violates a structural constraint (e.g. K > M under ZF).
    #[error("infeasible configuration: {0}")]
    Infeasible(String),

    /// Channel draw is rank-deficient or above the condition cap.
    #[error("singular channel: {0}")]
    SingularChannel(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
