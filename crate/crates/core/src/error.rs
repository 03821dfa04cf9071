use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("exponent k must be at least {min}, got {k}")]
    ExponentTooSmall { k: u32, min: u32 },

    #[error("shift must be nonzero")]
    ZeroShift,

    #[error("bound X must be at least {min}, got {x}")]
    BoundTooSmall { x: u64, min: u64 },

    #[error("expected a1 < a2, got a1 = {a1}, a2 = {a2}")]
    UnorderedPair { a1: u64, a2: u64 },

    #[error("s and t must be positive, got s = {s}, t = {t}")]
    BadGridShape { s: usize, t: usize },

    #[error("set elements must be positive and strictly increasing (offending value {value} at position {index})")]
    InvalidSet { index: usize, value: u64 },

    #[error("vertex list must be positive and strictly increasing (offending value {value} at position {index})")]
    InvalidVertices { index: usize, value: u64 },

    #[error("size guard exceeded: {what} is {size}, limit {limit}")]
    SizeGuard { what: &'static str, size: u64, limit: u64 },

    #[error("value out of range: {0}")]
    Overflow(&'static str),

    #[error("multiplier m must be at least 2, got {0}")]
    BadMultiplier(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
