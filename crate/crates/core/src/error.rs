use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point has no coordinates")]
    EmptyPoint,

    #[error("non-finite coordinate {value} at position {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("input contains no points")]
    EmptyInput,

    #[error("line {line}, column {column}: cannot parse {token:?} as a real number")]
    Parse {
        line: usize,
        column: usize,
        token: String,
    },

    #[error("line {line}: expected {expected} coordinates, found {found}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("instance too large: {what} is {size}, limit is {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("no spanning tree with maximum degree {maxdeg} exists on {n} vertices")]
    DegreeInfeasible { n: usize, maxdeg: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no block size in 3..=10 satisfies the path condition for distances {profile:?}")]
    NoBlockSize { profile: Vec<f64> },

    #[error("construction check failed: {0}")]
    Verification(String),

    #[error("linear system is feasible; witness {witness:?}")]
    Feasible { witness: Vec<String> },

    #[error("linear program solver failed: {0}")]
    Solver(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
