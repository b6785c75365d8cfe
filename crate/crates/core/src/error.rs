use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("missing probability for string {0:?}")]
    MissingKey(String),
    #[error("negative probability {value} for string {key:?}")]
    NegativeEntry { key: String, value: f64 },
    #[error("probability {value} for string {key:?} exceeds 1")]
    EntryAboveOne { key: String, value: f64 },
    #[error("probabilities sum to {sum}, expected 1")]
    SumNotOne { sum: f64 },
    #[error("length error: {0}")]
    Length(String),
    #[error("symbol {0:?} is not in the binary alphabet")]
    Alphabet(char),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("table with 2^{n} entries exceeds the cap of 2^{cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("eigenvalues {0} and {1} are not separated")]
    DuplicateEigenvalue(f64, f64),
    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("{0} hidden states exceed the exhaustive search limit of 8")]
    StateCountTooLarge(usize),
    #[error("no invertible {0}x{0} submatrix above the pivot threshold")]
    RankDeficient(usize),
    #[error("normalizing vector y is degenerate (max |y_i| = {0})")]
    DegenerateY(f64),
    #[error("verdict is not an HMP verdict")]
    WrongKind,
    #[error("{count} minors exceed the enumeration limit of {limit}")]
    TooManyMinors { count: u128, limit: u128 },
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error("{0}")]
    Format(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
