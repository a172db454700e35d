use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An enumeration would produce more sets than the configured budget.
    #[error("enumeration budget of {limit} sets exceeded")]
    BudgetExceeded { limit: usize },

    /// The representation cannot decide the requested property.
    #[error("capability: {0}")]
    Capability(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// No convex decomposition over the atoms available in `window`.
    #[error("no decomposition found inside window {window}; enlarge the window")]
    Infeasible { window: usize },

    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
