use thiserror::Error;

/// Failures shared by every module of the crate.
///
/// The CLI maps `Input` and `Precondition` to exit code 2; a `Hypothesis`
/// failure means a verified condition turned out false and maps to exit code 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("hypothesis `{condition}` fails: {witness}")]
    Hypothesis { condition: String, witness: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn hypothesis(condition: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::Hypothesis {
            condition: condition.into(),
            witness: witness.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
