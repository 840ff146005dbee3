use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Inputs violate an operation's preconditions.
    #[error("invalid parameters: {0}")]
    Parameter(String),

    /// A construction would exceed one of the configured [`Caps`](crate::Caps).
    #[error("resource cap exceeded: {what} reached {count} (cap {cap})")]
    Resource {
        what: &'static str,
        count: usize,
        cap: usize,
    },

    #[error("relation is not a partial order: {0}")]
    InvalidPoset(String),

    #[error("simplex set is not downward closed: face {face:?} of {simplex:?} is missing")]
    NotClosed { simplex: Vec<u32>, face: Vec<u32> },

    /// An internal consistency check failed (for example a boundary map that
    /// does not square to zero). Always a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}
