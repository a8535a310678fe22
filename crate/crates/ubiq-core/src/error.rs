use thiserror::Error;

/// Errors shared across the crate.
///
/// `WindowExhausted` is an expected outcome at finite scale (the window was
/// too small for the requested construction), while `Invariant` means a
/// checked property that should hold actually failed.
#[derive(Debug, Error)]
pub enum Error {
    #[error("generator invalid: {0}")]
    GeneratorInvalid(String),

    #[error("window exhausted: {0}")]
    WindowExhausted(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit status taxonomy for the CLI: expected window limits are
    /// distinguished from genuine invariant violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Io(_) => 2,
            Error::WindowExhausted(_) | Error::NotApplicable(_) => 3,
            Error::Invariant(_) | Error::Precondition(_) | Error::GeneratorInvalid(_) => 4,
        }
    }
}
