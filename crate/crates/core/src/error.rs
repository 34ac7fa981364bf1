use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("register must hold at least one qubit")]
    EmptyRegister,
    #[error("register of {0} qubits exceeds the limit of {1}")]
    TooManyQubits(usize, usize),
    #[error("input qubit is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("amplitude count {0} is not a power of two")]
    BadDimension(usize),
    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("qubit indices must be distinct (got {0} twice)")]
    IndexClash(usize),
    #[error("dimension mismatch: {0} vs {1} qubits")]
    DimensionMismatch(usize, usize),
    #[error("outcome {outcome} has probability {probability:e}; cannot force it")]
    ZeroProbabilityOutcome { outcome: u8, probability: f64 },
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("unknown site {0}")]
    UnknownSite(u32),
    #[error("graph parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("no local Clifford correction found")]
    NoLocalCorrection,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no valid measurement pattern found for {0}")]
    NoValidPattern(String),
    #[error("no decoding entry for outcomes {0:?}")]
    MissingDecoding(Vec<u8>),
}
