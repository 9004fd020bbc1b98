//! Optical two-level Hamiltonians and longitudinal ac drives.
//!
//! Two-level basis is (|g⟩, |e⟩) with σz = |e⟩⟨e| − |g⟩⟨g|. All rates are
//! angular (rad/μs), times in μs.

use quantum_core::operators::{sigma_x, sigma_z};
use quantum_core::{ComplexMatrix, HermitianOperator};

use crate::error::DriveError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalTlsParams {
    /// Optical Rabi frequency Ω.
    pub omega: f64,
    /// Laser detuning δ = ω_opt − ω₀.
    pub delta: f64,
    /// Bare resonance ω₀ (lab frame only).
    pub omega0: f64,
    /// Laser frequency ω_opt (lab frame only).
    pub omega_opt: f64,
}

impl OpticalTlsParams {
    pub fn rotating(omega: f64, delta: f64) -> Self {
        Self {
            omega,
            delta,
            omega0: 0.0,
            omega_opt: delta,
        }
    }

    pub fn lab(omega: f64, omega0: f64, omega_opt: f64) -> Self {
        Self {
            omega,
            delta: omega_opt - omega0,
            omega0,
            omega_opt,
        }
    }

    pub fn validate(&self) -> Result<(), DriveError> {
        if !(self.omega >= 0.0) {
            return Err(DriveError::Invalid(format!("Rabi frequency must be ≥ 0, got {}", self.omega)));
        }
        Ok(())
    }
}

/// One longitudinal tone 𝒜 cos(ωt + φ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcTone {
    /// Stark amplitude 𝒜, rad/μs.
    pub amplitude: f64,
    /// ω, rad/μs.
    pub frequency: f64,
    pub phase: f64,
}

impl AcTone {
    pub fn new(amplitude: f64, frequency: f64, phase: f64) -> Self {
        Self {
            amplitude,
            frequency,
            phase,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.amplitude * (self.frequency * t + self.phase).cos()
    }

    /// ∫ value dt = (𝒜/ω) sin(ωt + φ).
    pub fn antiderivative(&self, t: f64) -> f64 {
        self.amplitude / self.frequency * (self.frequency * t + self.phase).sin()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AcDrive {
    pub tones: Vec<AcTone>,
}

/// Optional linear Stark map 𝒜 = κ·|F|, with κ in (rad/μs)/(MV/m).
pub fn stark_amplitude(kappa: f64, field_mv_per_m: f64) -> f64 {
    kappa * field_mv_per_m.abs()
}

impl AcDrive {
    pub fn monochromatic(amplitude: f64, frequency: f64) -> Self {
        Self {
            tones: vec![AcTone::new(amplitude, frequency, 0.0)],
        }
    }

    /// 𝒜₁cos(ω₁t) + 𝒜₂cos(ω₂t + φ).
    pub fn bichromatic(a1: f64, w1: f64, a2: f64, w2: f64, phi: f64) -> Self {
        Self {
            tones: vec![AcTone::new(a1, w1, 0.0), AcTone::new(a2, w2, phi)],
        }
    }

    pub fn validate(&self) -> Result<(), DriveError> {
        if self.tones.is_empty() || self.tones.len() > 2 {
            return Err(DriveError::Invalid(format!("drive needs 1 or 2 tones, got {}", self.tones.len())));
        }
        if let Some(t) = self.tones.iter().find(|t| !(t.frequency > 0.0)) {
            return Err(DriveError::Invalid(format!("drive frequency must be > 0, got {}", t.frequency)));
        }
        Ok(())
    }

    pub fn value(&self, t: f64) -> f64 {
        self.tones.iter().map(|tone| tone.value(t)).sum()
    }

    pub fn antiderivative(&self, t: f64) -> f64 {
        self.tones.iter().map(|tone| tone.antiderivative(t)).sum()
    }

    pub fn peak_amplitude(&self) -> f64 {
        self.tones.iter().map(|t| t.amplitude.abs()).sum()
    }
}

fn build(m: ComplexMatrix) -> HermitianOperator {
    HermitianOperator::angular(m).expect("real symmetric combination of Pauli matrices")
}

/// (Ω/2)σx + ((δ + Σ𝒜ᵢcos(ωᵢt + φᵢ))/2)σz.
pub fn rotating_frame_hamiltonian(p: &OpticalTlsParams, drive: Option<&AcDrive>, t: f64) -> HermitianOperator {
    let dz = p.delta + drive.map_or(0.0, |d| d.value(t));
    build(&sigma_x().scale_real(p.omega / 2.0) + &sigma_z().scale_real(dz / 2.0))
}

/// Ω cos(ω_opt t) σx + (ω₀/2)σz, whose rotating-wave limit is the
/// rotating-frame Hamiltonian with Rabi frequency Ω.
pub fn lab_frame_hamiltonian(p: &OpticalTlsParams, t: f64) -> HermitianOperator {
    build(&sigma_x().scale_real(p.omega * (p.omega_opt * t).cos()) + &sigma_z().scale_real(p.omega0 / 2.0))
}
