//! Photoluminescence excitation spectra.

use optical_driving::AcDrive;
use rayon::prelude::*;

use crate::emission::{emission_point, EmissionSettings, Readout};
use crate::error::ExperimentError;
use crate::scan::{Axis, ScanResult, PHOTONS, RAD_PER_US, RATE};

pub(crate) fn check_monotone(grid: &[f64], name: &str) -> Result<(), ExperimentError> {
    if grid.is_empty() || grid.iter().any(|v| !v.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ExperimentError::InvalidParameter(format!("{name} grid must be finite and strictly increasing")));
    }
    Ok(())
}

pub(crate) fn value_label(settings: &EmissionSettings) -> (&'static str, &'static str) {
    match settings.readout {
        Readout::Pulsed { .. } => ("emission", PHOTONS),
        Readout::ContinuousWave => ("emission_rate", RATE),
    }
}

/// Emission versus laser detuning δ (rad/μs), optionally under an ac Stark drive.
pub fn ple_scan(deltas: &[f64], settings: &EmissionSettings, drive: Option<&AcDrive>) -> Result<ScanResult, ExperimentError> {
    settings.validate()?;
    check_monotone(deltas, "detuning")?;
    let values = deltas
        .par_iter()
        .map(|&d| emission_point(settings, d, drive))
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(ScanResult::new(Axis::new("delta", RAD_PER_US, deltas.to_vec()), None, value_label(settings), values)?.with_metadata("experiment", "ple"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use lindblad_solver::BlochParams;

    #[test]
    fn spectrum_is_even_in_detuning_without_drive() {
        let s = EmissionSettings::pulsed(2.0, BlochParams::new(1.0, 4.0, 0.0), 3.0);
        let r = ple_scan(&[-2.0, -0.5, 0.5, 2.0], &s, None).unwrap();
        assert!((r.values[0] - r.values[3]).abs() < 1e-12);
        assert!((r.values[1] - r.values[2]).abs() < 1e-12);
        assert!(r.values[1] > r.values[0]);
    }

    #[test]
    fn unsorted_grid_is_rejected() {
        let s = EmissionSettings::continuous(1.0, BlochParams::lifetime_limited(1.0));
        assert!(ple_scan(&[0.0, -1.0], &s, None).is_err());
    }
}
