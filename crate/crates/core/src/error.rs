//! Error type shared by the whole toolkit.

use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// The three variants deliberately mirror how callers react: bad model data
/// and bad arguments are caller errors; `Numerical` means a computation left
/// the regime in which its result is trustworthy (conditioning failures,
/// residues above tolerance, ...), which is a bug or an input far outside
/// the supported scale.
#[derive(Debug, Error)]
pub enum Error {
    /// Coefficient data violates the model invariants (lengths, positivity).
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// A function argument is outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A computation could not be completed to its advertised accuracy.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
