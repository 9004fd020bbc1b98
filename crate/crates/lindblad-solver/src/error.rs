use quantum_core::QuantumError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("record times must be non-decreasing")]
    TimesNotMonotone,

    #[error("step dt = {dt:e} μs violates {constraint} (limit {limit:e} μs)")]
    StepTooLarge {
        dt: f64,
        limit: f64,
        constraint: &'static str,
    },

    #[error(
        "integration accuracy lost at t = {time} μs (trace drift {trace_drift:e}, min eigenvalue {min_eigenvalue:e}); reduce dt"
    )]
    Accuracy {
        time: f64,
        trace_drift: f64,
        min_eigenvalue: f64,
    },

    #[error("steady state needs a time-independent Hamiltonian")]
    TimeDependent,

    #[error(transparent)]
    Linear(#[from] QuantumError),
}
