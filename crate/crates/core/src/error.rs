use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HurwitzError {
    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("resource bound exceeded: {what} = {got} (limit {limit})")]
    ResourceBound {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("partition sizes differ: {0} vs {1}")]
    SizeMismatch(u32, u32),

    #[error("singular interpolation system: {0}")]
    Singular(String),

    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    #[error("series truncated at weight {available}, need {needed}")]
    TruncationInsufficient { needed: u32, available: u32 },

    #[error("structural assertion failed: {0}")]
    Assertion(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("table error: {0}")]
    Table(String),
}

pub type Result<T> = std::result::Result<T, HurwitzError>;
