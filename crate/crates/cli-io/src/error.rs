use std::path::PathBuf;

use experiments::ExperimentError;
use lindblad_solver::SolverError;
use spin_dynamics::SpinDynamicsError;
use spin_hamiltonian::SpinError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("--set {0}")]
    Override(String),

    #[error("unknown key `{key}`; did you mean `{nearest}`?")]
    UnknownKey { key: String, nearest: String },

    #[error("key `{key}`: expected a {expected}, found a {found}")]
    Type { key: String, expected: &'static str, found: &'static str },

    #[error("key `{key}`: {message}")]
    Invalid { key: String, message: String },

    #[error("missing key `{0}`")]
    Missing(String),

    #[error("config is for experiment {found}, not {expected}")]
    WrongExperiment { found: String, expected: String },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(#[from] ConfigError),

    #[error(transparent)]
    Experiment(#[from] ExperimentError),

    #[error(transparent)]
    SpinDynamics(#[from] SpinDynamicsError),

    #[error(transparent)]
    Spin(#[from] SpinError),

    #[error(transparent)]
    Solver(#[from] SolverError),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl CliError {
    /// 2 for configuration problems, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}
