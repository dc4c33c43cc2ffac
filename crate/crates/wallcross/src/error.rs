use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed configuration: bad dimensions, bad rationals, unknown fields.
    #[error("config error: {0}")]
    Config(String),

    /// A value outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A violated operation precondition (invalid class, failed dominance, ...).
    #[error("precondition error: {0}")]
    Precondition(String),

    /// A table lookup that names a class the input tables do not cover.
    #[error("missing table entry: {0}")]
    MissingEntry(String),
}

pub type Result<T> = std::result::Result<T, Error>;
