use quantum_core::QuantumError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpinError {
    #[error("invalid spin parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("field grid must be strictly increasing (violated at index {0})")]
    GridNotMonotone(usize),

    #[error("dν/dB_z does not change sign on [{lower}, {upper}] mT")]
    NoSignChange { lower: f64, upper: f64 },

    #[error(transparent)]
    Linear(#[from] QuantumError),
}
