use quantum_core::lsq::LmFailure;
use quantum_core::QuantumError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpinDynamicsError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown transition `{0}` (expected zero_plus or plus_minus)")]
    UnknownTransition(String),

    #[error("envelope fit failed: {0}")]
    Fit(#[from] LmFailure),

    #[error(transparent)]
    Linear(#[from] QuantumError),
}
