//! Emission from the driven three-level model at one laser detuning.

use std::f64::consts::TAU;

use lindblad_solver::bloch::{EXCITED, GROUND};
use lindblad_solver::{evolve_periodic, evolve_with_observables, steady_state, three_level_bloch_model, with_stark_drive, BlochParams, LindbladModel, StepLimits};
use optical_driving::AcDrive;
use quantum_core::operators::projector;
use quantum_core::DensityMatrix;

use crate::error::ExperimentError;

/// Steps per inverse of the fastest interaction-picture frequency.
pub const DEFAULT_STEP_FACTOR: f64 = 0.25;
/// Steps per drive period, at least.
pub const STEPS_PER_DRIVE_PERIOD: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Readout {
    /// Laser on for `window` μs starting from |g⟩; reports ∫ ρₑₑ/T₁ dt.
    Pulsed { window: f64 },
    /// Steady-state emission rate ρₑₑ/T₁.
    ContinuousWave,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionSettings {
    /// Optical Rabi frequency Ω, rad/μs.
    pub omega: f64,
    pub bloch: BlochParams,
    pub readout: Readout,
    pub step_factor: f64,
}

impl EmissionSettings {
    pub fn pulsed(omega: f64, bloch: BlochParams, window: f64) -> Self {
        Self {
            omega,
            bloch,
            readout: Readout::Pulsed { window },
            step_factor: DEFAULT_STEP_FACTOR,
        }
    }

    pub fn continuous(omega: f64, bloch: BlochParams) -> Self {
        Self {
            omega,
            bloch,
            readout: Readout::ContinuousWave,
            step_factor: DEFAULT_STEP_FACTOR,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        self.bloch.validate()?;
        if !(self.omega >= 0.0 && self.omega.is_finite()) {
            return Err(ExperimentError::InvalidParameter(format!("Rabi frequency must be ≥ 0, got {}", self.omega)));
        }
        if !(self.step_factor > 0.0 && self.step_factor <= 1.0) {
            return Err(ExperimentError::InvalidParameter(format!("step factor must be in (0, 1], got {}", self.step_factor)));
        }
        if let Readout::Pulsed { window } = self.readout {
            if !(window > 0.0 && window.is_finite()) {
                return Err(ExperimentError::InvalidParameter(format!("readout window must be > 0, got {window}")));
            }
        }
        Ok(())
    }

    /// Same physics with every rate multiplied by `lambda`.
    pub fn rescaled(&self, lambda: f64) -> Self {
        Self {
            omega: self.omega * lambda,
            bloch: self.bloch.rescaled(lambda),
            readout: match self.readout {
                Readout::Pulsed { window } => Readout::Pulsed { window: window / lambda },
                Readout::ContinuousWave => Readout::ContinuousWave,
            },
            step_factor: self.step_factor,
        }
    }
}

/// Common period of all tones, when their frequencies are integer
/// multiples of the lowest one.
pub fn drive_period(drive: &AcDrive) -> Option<f64> {
    let base = drive.tones.iter().map(|t| t.frequency).fold(f64::INFINITY, f64::min);
    let commensurate = drive.tones.iter().all(|t| {
        let r = t.frequency / base;
        (r - r.round()).abs() <= 1e-9 * r
    });
    (base.is_finite() && commensurate).then(|| TAU / base)
}

/// Integration step for detuning `delta` under `drive`.
pub fn step_size(settings: &EmissionSettings, delta: f64, drive: Option<&AcDrive>, model: &LindbladModel) -> f64 {
    let amplitude = drive.map_or(0.0, AcDrive::peak_amplitude);
    let nu = delta.abs() + amplitude + settings.omega;
    let mut dt = StepLimits::of(model).max_step();
    if nu > 0.0 {
        dt = dt.min(settings.step_factor / nu);
    }
    if let Some(d) = drive {
        let fastest = d.tones.iter().map(|t| t.frequency).fold(0.0, f64::max);
        dt = dt.min(TAU / (STEPS_PER_DRIVE_PERIOD * fastest));
    }
    if let Readout::Pulsed { window } = settings.readout {
        dt = dt.min(window / 20.0);
    }
    dt
}

pub fn build_model(settings: &EmissionSettings, delta: f64, drive: Option<&AcDrive>) -> Result<LindbladModel, ExperimentError> {
    let model = three_level_bloch_model(settings.omega, delta, &settings.bloch, None)?;
    Ok(match drive {
        Some(d) => with_stark_drive(model, d)?,
        None => model,
    })
}

/// Emission at one detuning: photons per readout pulse, or the steady-state
/// rate for continuous-wave readout.
pub fn emission_point(settings: &EmissionSettings, delta: f64, drive: Option<&AcDrive>) -> Result<f64, ExperimentError> {
    let model = build_model(settings, delta, drive)?;
    let t1 = settings.bloch.t1;
    match settings.readout {
        Readout::ContinuousWave => {
            if drive.is_some() {
                return Err(ExperimentError::InvalidParameter(
                    "continuous-wave readout needs a static Hamiltonian; use the pulsed path with an ac drive".into(),
                ));
            }
            let ss = steady_state(&model)?;
            if ss.is_trapped() {
                return Err(ExperimentError::TrappedSteadyState);
            }
            Ok(ss.state.population(EXCITED) / t1)
        }
        Readout::Pulsed { window } => {
            let dt = step_size(settings, delta, drive, &model);
            let rho0 = DensityMatrix::basis_state(3, GROUND);
            let pe = [projector(3, EXCITED)];
            let integral = match drive.and_then(drive_period) {
                Some(period) => evolve_periodic(&rho0, &model, period, window, dt, &pe)?.integrals[0],
                None => evolve_with_observables(&rho0, &model, &[0.0, window], dt, &pe)?.integrals[1][0],
            };
            Ok(integral / t1)
        }
    }
}
