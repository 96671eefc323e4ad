use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max |m - m^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("negative eigenvalue {value:e} on a matrix expected to be positive semidefinite")]
    NegativeEigenvalue { value: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),
    #[error("unknown letter {letter:?} for sender {sender}")]
    UnknownLetter { sender: char, letter: String },
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid entropy profile: {0}")]
    InvalidProfile(String),
    #[error("invalid sampler plan: {0}")]
    InvalidSamplerPlan(String),
    #[error("time-sharing weight {0} is outside [0, 1]")]
    LambdaOutOfRange(f64),
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("Hilbert-space dimension {dim} exceeds the cap of {cap}")]
    DimensionCapExceeded { dim: usize, cap: usize },
    #[error("invalid codebook: {0}")]
    InvalidCodebook(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than by a numerical
    /// computation going wrong.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidEnsemble(_)
                | Error::UnknownLetter { .. }
                | Error::InvalidDistribution(_)
                | Error::InvalidSamplerPlan(_)
                | Error::LambdaOutOfRange(_)
                | Error::LengthMismatch(_)
                | Error::InvalidCodebook(_)
                | Error::InvalidState(_)
                | Error::Config(_)
                | Error::Io(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
