use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DriveError {
    #[error("invalid drive: {0}")]
    Invalid(String),

    #[error("generalized Bessel expansion needs ω₂ = 2ω₁ (got ω₁ = {w1}, ω₂ = {w2})")]
    NotOctave { w1: f64, w2: f64 },
}
