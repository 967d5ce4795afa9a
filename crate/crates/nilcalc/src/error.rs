use thiserror::Error;

pub type NumResult<T> = Result<T, NumError>;

#[derive(Debug, Error)]
pub enum NumError {
    /// Bad flags, missing files, malformed spec files or unsupported
    /// requests.
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] nilcalc_core::Error),
    /// The computation ran but its result cannot be trusted (instability,
    /// unresolved quadrature, truncation).
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("internal consistency error: {0}")]
    Consistency(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl NumError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            NumError::Config(_) | NumError::Io(_) => 2,
            NumError::Core(e) => match e {
                nilcalc_core::Error::Consistency(_) => 3,
                _ => 2,
            },
            NumError::Numerical(_) => 1,
            NumError::Consistency(_) => 3,
        }
    }
}
