use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),

    #[error("dimension mismatch at `{path}`: expected {expected}, found {found}")]
    DimensionMismatch {
        path: String,
        expected: usize,
        found: usize,
    },

    #[error("`{path}` must be a positive integer, found {value}")]
    NonPositive { path: String, value: i64 },

    #[error("{what} too large for exhaustive enumeration: {size} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("{0} qubits exceeds the simulator limit of {1}")]
    QubitLimit(usize, usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite objective value {value} at iteration {iteration}")]
    NonFinite { value: f64, iteration: usize },

    #[error("unknown scenario {0}")]
    UnknownScenario(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
