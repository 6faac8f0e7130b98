//! Crate-wide error type.

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by game construction, learners, predictors and metrics.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A vector or matrix does not have the shape an operation requires.
    #[error("{what}: expected dimension {expected}, got {actual}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        actual: usize,
    },

    /// A per-agent shape violation, naming the offending agent.
    #[error("agent {agent}: {what}: expected dimension {expected}, got {actual}")]
    AgentDimensionMismatch {
        agent: usize,
        what: String,
        expected: usize,
        actual: usize,
    },

    /// Context index outside `0..m`.
    #[error("context index {index} out of range (m = {m})")]
    ContextIndex { index: usize, m: usize },

    /// NaN or infinity where a finite value is required.
    #[error("non-finite value in {0}")]
    NonFinite(String),

    /// Damped power iteration failed to reach the residual tolerance.
    #[error("fixed point not reached after {iterations} iterations (residual {residual:.3e})")]
    FixedPointDivergence { residual: f64, iterations: usize },

    /// The exhaustive computation was refused because it would not terminate
    /// in reasonable time.
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    /// Online classification version space became empty.
    #[error("version space is empty: the label stream is not realizable by the hypothesis class")]
    NonRealizable,

    /// Text format violation, with 1-based line number.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A bound audit was requested on a trace that does not satisfy the
    /// bound's premise (wrong learning rate, missing shared predictions, ...).
    #[error("bound premise violated: {0}")]
    BoundPremise(String),

    /// Catch-all input validation failure.
    #[error("{0}")]
    InvalidInput(String),

    /// Protocol misuse, e.g. updating a learner before it acted.
    #[error("{0}")]
    Protocol(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
