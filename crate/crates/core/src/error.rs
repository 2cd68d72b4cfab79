use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit index {index} out of range for {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("qubit {0} appears more than once in a gate")]
    DuplicateQubit(usize),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("measurement branch has zero probability ({0:e})")]
    ZeroProbabilityBranch(f64),
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("observation is impossible under the current belief (evidence {0:e})")]
    ImpossibleObservation(f64),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("q has zero mass where p is positive at index {0}")]
    AbsoluteContinuity(usize),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("posterior underflowed to zero everywhere on the grid")]
    PosteriorUnderflow,
    #[error("matrix is singular")]
    Singular,
    #[error("problem too large for exhaustive search: {n} variables (cap {cap})")]
    TooLarge { n: usize, cap: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
