//! Error type shared by all solver modules.

/// Errors surfaced by the toolkit.
///
/// The three variants map onto the three failure classes the solvers
/// distinguish: bad caller input, an exceeded enumeration/iteration budget,
/// and a violated internal contract (the last one always indicates a bug or
/// a corrupted oracle and is never silently swallowed).
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("internal contract violated: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }

    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
