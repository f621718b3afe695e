use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("read {index} is empty")]
    EmptyRead { index: usize },
    #[error("read {index} contains invalid base {base:?} at position {position}")]
    InvalidBase {
        index: usize,
        position: usize,
        base: char,
    },
    #[error("read {index} duplicates read {first}")]
    DuplicateRead { index: usize, first: usize },
    #[error("at least {needed} reads are required, got {got}")]
    TooFewReads { needed: usize, got: usize },
    #[error("overlap matrix is all zero; normalization is undefined")]
    ZeroOverlap,
    #[error("invalid tour: {0}")]
    InvalidTour(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("value {value} is not a valid {vartype} variable value")]
    InvalidValue { value: i8, vartype: &'static str },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{num_variables} variables exceed the exact-solver cap of {cap}")]
    TooManyVariables { num_variables: usize, cap: usize },
    #[error("invalid annealing schedule: {0}")]
    InvalidSchedule(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("no embedding found after {tries} tries")]
    EmbeddingNotFound { tries: usize },
    #[error("qubit {qubit} out of range for a {qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, qubits: usize },
    #[error(
        "term on {support} qubits cannot be compiled; only 1- and 2-qubit Z terms are supported"
    )]
    UnsupportedTerm { support: usize },
    #[error("{qubits} qubits exceed the simulator cap of {cap}")]
    TooManyQubits { qubits: usize, cap: usize },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
