//! Monochromatic Landau–Zener–Stückelberg maps and band integrals.

use optical_driving::AcDrive;
use rayon::prelude::*;

use crate::emission::{emission_point, EmissionSettings};
use crate::error::ExperimentError;
use crate::ple::{check_monotone, value_label};
use crate::scan::{Axis, ScanResult, RAD_PER_US};

/// Emission map over Stark amplitude 𝒜 (axis 1) and detuning δ (axis 2)
/// for a drive 𝒜cos(ωt).
pub fn lzs_map(amplitudes: &[f64], deltas: &[f64], drive_frequency: f64, settings: &EmissionSettings) -> Result<ScanResult, ExperimentError> {
    settings.validate()?;
    check_monotone(amplitudes, "amplitude")?;
    check_monotone(deltas, "detuning")?;
    if !(drive_frequency > 0.0 && drive_frequency.is_finite()) {
        return Err(ExperimentError::InvalidParameter(format!("drive frequency must be > 0, got {drive_frequency}")));
    }
    let nd = deltas.len();
    let values = (0..amplitudes.len() * nd)
        .into_par_iter()
        .map(|k| {
            let drive = AcDrive::monochromatic(amplitudes[k / nd], drive_frequency);
            emission_point(settings, deltas[k % nd], Some(&drive))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(ScanResult::new(
        Axis::new("amplitude", RAD_PER_US, amplitudes.to_vec()),
        Some(Axis::new("delta", RAD_PER_US, deltas.to_vec())),
        value_label(settings),
        values,
    )?
    .with_metadata("experiment", "lzs")
    .with_metadata("drive_frequency", drive_frequency))
}

/// Linear interpolation of (x, y) at t, with x increasing and t inside.
fn interpolate(x: &[f64], y: &[f64], t: f64) -> f64 {
    let k = x.partition_point(|&v| v < t).clamp(1, x.len() - 1);
    let f = (t - x[k - 1]) / (x[k] - x[k - 1]);
    y[k - 1] + f * (y[k] - y[k - 1])
}

/// ∫ y dx over [a, b] by the trapezoid rule with interpolated edges.
pub fn integrate_between(x: &[f64], y: &[f64], a: f64, b: f64) -> f64 {
    let mut nodes = vec![(a, interpolate(x, y, a))];
    nodes.extend(x.iter().zip(y).filter(|(v, _)| **v > a && **v < b).map(|(v, w)| (*v, *w)));
    nodes.push((b, interpolate(x, y, b)));
    nodes.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum()
}

/// Emission integrated over δ ∈ [nω − ω/2, nω + ω/2], one value per amplitude.
pub fn band_integrated_intensity(map: &ScanResult, n: i64, omega: f64) -> Result<Vec<f64>, ExperimentError> {
    let deltas = &map
        .axis2
        .as_ref()
        .ok_or_else(|| ExperimentError::InvalidParameter("band integration needs a two-dimensional map".into()))?
        .values;
    let (lower, upper) = ((n as f64 - 0.5) * omega, (n as f64 + 0.5) * omega);
    let (min, max) = (deltas[0], deltas[deltas.len() - 1]);
    let slack = 1e-9 * omega.abs();
    if deltas.len() < 2 || lower < min - slack || upper > max + slack {
        return Err(ExperimentError::BandOutOfRange { n, lower, upper, min, max });
    }
    let (lower, upper) = (lower.max(min), upper.min(max));
    Ok((0..map.axis1.len()).map(|i| integrate_between(deltas, map.row(i), lower, upper)).collect())
}
