use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("series limits differ: {left} vs {right}")]
    LimitMismatch { left: usize, right: usize },

    #[error("no local parameters for prime {0}")]
    MissingPrime(u64),

    #[error("data corruption: {0}")]
    DataCorruption(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("data error: {0}")]
    Data(String),

    #[error("window [{start}, {end}] exceeds series limit {limit}")]
    Range {
        start: usize,
        end: usize,
        limit: usize,
    },

    #[error("need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("series `{0}` is not real-valued")]
    NotReal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
