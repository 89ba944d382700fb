use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { name: String, position: usize },

    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("structure violation at entry ({row}, {col}): {message}")]
    Structure { row: usize, col: usize, message: String },

    #[error("operation requires a monomial ideal")]
    NonMonomial,

    #[error("operation is undefined for the {0} ideal")]
    DegenerateIdeal(&'static str),

    #[error("incompatible request: {0}")]
    Incompatible(String),

    #[error("truncation t^{truncation} is insufficient: {detail}")]
    TruncationInsufficient { truncation: u32, detail: String },

    #[error("containment undecided up to truncation {max_truncation}")]
    Undecided { max_truncation: u32 },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("internal error: {0}")]
    Internal(String),
}
