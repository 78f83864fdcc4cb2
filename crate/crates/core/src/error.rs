use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument outside the operation's domain.
    #[error("{op}: {reason}")]
    Domain { op: &'static str, reason: String },

    /// The request would exceed a configured resource limit.
    #[error("{what} needs {requested}, budget is {limit}")]
    Budget {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    /// An arithmetic invariant was violated; always a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            op,
            reason: reason.into(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}
