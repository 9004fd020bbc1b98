use lindblad_solver::SolverError;
use quantum_core::lsq::LmFailure;
use quantum_core::QuantumError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("the steady state is an absorbing trap (Γ > 0 without repump); use the pulsed readout path")]
    TrappedSteadyState,

    #[error("band n = {n} spans δ ∈ [{lower}, {upper}] but the map covers [{min}, {max}]")]
    BandOutOfRange { n: i64, lower: f64, upper: f64, min: f64, max: f64 },

    #[error("fit failed: {0}")]
    Fit(#[from] LmFailure),

    #[error(transparent)]
    Solver(#[from] SolverError),

    #[error(transparent)]
    Linear(#[from] QuantumError),
}
