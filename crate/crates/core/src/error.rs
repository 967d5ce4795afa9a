use alloc::string::String;

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The algebra description is malformed (bad index, zero weight, ...).
    #[error("malformed algebra spec: {0}")]
    Spec(String),
    /// The description is well formed but violates antisymmetry, Jacobi or
    /// the gradation.
    #[error("algebra is not a graded nilpotent Lie algebra: {0}")]
    Gradation(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// An exact identity that must hold by construction failed. This signals
    /// corrupted group-law data rather than bad input.
    #[error("internal consistency error: {0}")]
    Consistency(String),
}
