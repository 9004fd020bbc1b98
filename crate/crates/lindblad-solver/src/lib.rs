//! Lindblad master-equation integration and the three-level optical Bloch model.

pub mod bloch;
pub mod error;
pub mod health;
pub mod liouvillian;
pub mod model;
pub mod solver;
pub mod steady;

pub use bloch::{emission_signal, three_level_bloch_model, with_stark_drive, BlochParams, DephasingConvention};
pub use error::SolverError;
pub use model::{CollapseLabel, CollapseOperator, Coefficient, LindbladModel, PulseEnvelope, PulseShape};
pub use solver::{evolve, evolve_periodic, evolve_with_observables, PeriodicRun, StepLimits, Trajectory};
pub use steady::{steady_state, SteadyState, SteadyStateKind};
