use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ground-set mismatch")]
    GroundMismatch,

    #[error("domain mismatch")]
    DomainMismatch,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("budget exceeded: {what} reached {count} (limit {limit})")]
    BudgetExceeded {
        what: &'static str,
        count: u64,
        limit: u64,
    },

    #[error("{what} {index} out of stored range 0..={max}")]
    OutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("boundary composition is nonzero: {0}")]
    NotAChainComplex(String),

    #[error("gap smaller than p: |T| - |S| = {gap} < {p}")]
    GapSmallerThanP { gap: usize, p: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
