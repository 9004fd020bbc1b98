//! Two-tone (ω, 2ω) Stark driving versus relative phase.

use optical_driving::AcDrive;
use rayon::prelude::*;

use crate::emission::{emission_point, EmissionSettings};
use crate::error::ExperimentError;
use crate::peaks::parabolic_vertex;
use crate::ple::{check_monotone, value_label};
use crate::scan::{Axis, ScanResult, RAD, RAD_PER_US};

/// Tones 𝒜₁cos(ω₁t) + 𝒜₂cos(2ω₁t + φ) with 𝒜ᵢ/ωᵢ = `ratio` for both.
pub fn bichromatic_drive(omega1: f64, ratio: f64, phi: f64) -> AcDrive {
    AcDrive::bichromatic(ratio * omega1, omega1, ratio * 2.0 * omega1, 2.0 * omega1, phi)
}

/// Emission map over drive phase φ (axis 1) and detuning δ (axis 2).
pub fn bichromatic_map(phis: &[f64], deltas: &[f64], omega1: f64, ratio: f64, settings: &EmissionSettings) -> Result<ScanResult, ExperimentError> {
    settings.validate()?;
    check_monotone(phis, "phase")?;
    check_monotone(deltas, "detuning")?;
    if !(omega1 > 0.0 && omega1.is_finite() && ratio >= 0.0 && ratio.is_finite()) {
        return Err(ExperimentError::InvalidParameter(format!("need ω₁ > 0 and 𝒜/ω ≥ 0, got {omega1}, {ratio}")));
    }
    let nd = deltas.len();
    let values = (0..phis.len() * nd)
        .into_par_iter()
        .map(|k| emission_point(settings, deltas[k % nd], Some(&bichromatic_drive(omega1, ratio, phis[k / nd]))))
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(ScanResult::new(
        Axis::new("phi", RAD, phis.to_vec()),
        Some(Axis::new("delta", RAD_PER_US, deltas.to_vec())),
        value_label(settings),
        values,
    )?
    .with_metadata("experiment", "bichromatic")
    .with_metadata("omega1", omega1)
    .with_metadata("ratio", ratio))
}

/// Height of the sideband near δ = nω in one spectrum: the largest sample
/// within ±ω/4, refined by a parabola through its neighbours.
pub fn sideband_height(deltas: &[f64], values: &[f64], n: i64, omega: f64) -> Option<f64> {
    let centre = n as f64 * omega;
    let (k, _) = deltas
        .iter()
        .enumerate()
        .filter(|(_, d)| (**d - centre).abs() <= 0.25 * omega)
        .max_by(|a, b| values[a.0].total_cmp(&values[b.0]))?;
    if k == 0 || k + 1 == deltas.len() {
        return Some(values[k]);
    }
    let (_, h) = parabolic_vertex([deltas[k - 1], deltas[k], deltas[k + 1]], [values[k - 1], values[k], values[k + 1]]);
    Some(h.max(values[k]))
}
