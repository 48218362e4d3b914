use thiserror::Error;

use crate::dimer::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: bad JSON, wrong types, unresolved ids.
    #[error("input error at {pointer}: {message}")]
    Input { pointer: String, message: String },

    /// The model parsed but violates a dimer-model invariant.
    #[error("invalid dimer model: {0}")]
    Invalid(ValidationReport),

    #[error("degenerate model: {0}")]
    Degenerate(String),

    /// A computed object failed one of its structural checks.
    #[error("{kind}: {message}")]
    Invariant { kind: &'static str, message: String },
}

impl Error {
    pub fn input(pointer: impl Into<String>, message: impl Into<String>) -> Error {
        Error::Input { pointer: pointer.into(), message: message.into() }
    }

    pub fn invariant(kind: &'static str, message: impl Into<String>) -> Error {
        Error::Invariant { kind, message: message.into() }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Input { .. } => "input",
            Error::Invalid(_) => "invalid-model",
            Error::Degenerate(_) => "degenerate",
            Error::Invariant { kind, .. } => kind,
        }
    }

    pub fn is_input(&self) -> bool {
        matches!(self, Error::Input { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
