use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid letter {ch:?} at offset {offset} (expected 'b' or 'r')")]
    InvalidLetter { ch: char, offset: usize },

    #[error("position {pos} out of range for a word of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("word length {len} exceeds the enumeration bound {max}")]
    TooLong { len: usize, max: usize },

    #[error("malformed tree: {0}")]
    MalformedTree(String),

    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },

    #[error("star is only defined for proper series (nonzero constant term)")]
    NotProper,

    #[error("the reduced representation has no coefficient for the empty word")]
    EmptyWord,

    #[error("basis element T{index} is not matched by the basis under {letter}^-1: {reason}")]
    Derivation {
        index: usize,
        letter: char,
        reason: String,
    },

    #[error("singular word {word}: Z^hcd vanishes at the evaluation point")]
    Singular { word: String },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
