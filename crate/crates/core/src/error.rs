use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// The canonical form has a nontrivial kernel; carries a kernel basis
    /// rendered as rational vectors.
    #[error("degenerate canonical form (kernel basis {kernel:?})")]
    DegenerateForm { kernel: Vec<Vec<String>> },

    #[error("invalid covector system: {0}")]
    InvalidSystem(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
