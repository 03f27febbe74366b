use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An operand violates the operation's domain (empty set, off-lattice element, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter block is inconsistent or outside the supported range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A precondition of a construction or lemma is not met.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Work budget exhausted. Never a silent truncation: the partial report says how far we got.
    #[error("budget exceeded: {what} (limit {limit}); {partial}")]
    Budget {
        what: String,
        limit: u64,
        partial: String,
    },

    /// A certified invariant failed. Reaching this is a defect in the library.
    #[error("internal invariant failed: {0}")]
    Invariant(String),

    /// Values that do not fit the dense storage window.
    #[error("storage error: {0}")]
    Storage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn parameter<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
