use quantum_autonomy::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Runtime(String),
}

impl BenchError {
    pub fn category(&self) -> &'static str {
        match self {
            BenchError::Validation(_) => "validation",
            BenchError::Io(_) => "io",
            BenchError::Runtime(_) => "runtime",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Validation(_) => 2,
            BenchError::Io(_) => 3,
            BenchError::Runtime(_) => 4,
        }
    }

    pub fn io(path: &std::path::Path, e: impl std::fmt::Display) -> Self {
        BenchError::Io(format!("{}: {e}", path.display()))
    }
}

impl From<CoreError> for BenchError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidArgument(_)
            | CoreError::InvalidModel(_)
            | CoreError::Parse(_)
            | CoreError::ZeroShots
            | CoreError::LengthMismatch { .. }
            | CoreError::TooLarge { .. }
            | CoreError::QubitOutOfRange { .. }
            | CoreError::DuplicateQubit(_)
            | CoreError::InvalidGate(_) => BenchError::Validation(e.to_string()),
            _ => BenchError::Runtime(e.to_string()),
        }
    }
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;

pub fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(BenchError::Validation(msg.into()))
}
