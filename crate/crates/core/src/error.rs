use thiserror::Error;

/// Everything that can go wrong across the library.
///
/// Parse errors carry a byte offset so callers can point at the offending
/// token; arithmetic errors name the generator or size that caused them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid chord diagram: {0}")]
    InvalidChords(String),
    #[error("swap position {k} out of range for size {m}")]
    SwapOutOfRange { k: u32, m: usize },
    #[error("swap at position {k} touches a fixed point")]
    SwapOnFixedPoint { k: u32 },
    #[error("truncation orders differ: {0} vs {1}")]
    TruncationMismatch(usize, usize),
    #[error("series {op} requires constant term {need}, found {found}")]
    SeriesConstantTerm {
        op: &'static str,
        need: &'static str,
        found: String,
    },
    #[error("no value supplied for generator {0}")]
    MissingGenerator(String),
    #[error("generator {gen} is not allowed in {context}")]
    UnsupportedGenerator { gen: String, context: &'static str },
    #[error("matrix sizes differ: {0} vs {1}")]
    MatrixSizeMismatch(u8, u8),
    #[error("matrix unit E({row},{col}) does not fit in gl_{n}")]
    UnitOutOfRange { row: u8, col: u8, n: u8 },
    #[error("resource budget of {limit} exhausted; rerun with a larger limit")]
    ResourceLimit { limit: usize },
    #[error("coefficient {0} is not an integer")]
    NonIntegerCoefficient(String),
    #[error("weight vector has {found} entries, expected {need}")]
    WeightLength { need: usize, found: usize },
    #[error("monomial contains non-diagonal factor {0}")]
    NonCartanFactor(String),
    #[error("cache file is not usable: {0}")]
    CacheFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand used by the text parsers.
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
