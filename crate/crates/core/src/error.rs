use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("value is not rational: {0}")]
    NotRational(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid group data: {0}")]
    Validation(String),

    #[error("unstable moduli: genus {genus} with {points} marked points")]
    Unstable { genus: u32, points: usize },

    #[error("ch_0 is the virtual rank; use rank_virtual")]
    ChDegreeZero,

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("bad query: {0}")]
    Query(String),

    /// Two independent computations disagreed. Always a bug or corrupt input.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
