//! Single-Lorentzian line fits.

use std::f64::consts::TAU;

use quantum_core::lsq::{levenberg_marquardt, Bound, LmOptions};

use crate::error::ExperimentError;
use crate::peaks::noise_floor as median;
use crate::scan::{ScanResult, MHZ, RAD_PER_US};

/// Residual rms above this multiple of the noise floor flags a poor single-line fit.
pub const MERGED_PEAK_FACTOR: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
pub struct LorentzianFit {
    pub center: f64,
    /// Full width at half maximum in axis units.
    pub fwhm: f64,
    pub fwhm_mhz: f64,
    pub amplitude: f64,
    pub offset: f64,
    pub residual_rms: f64,
    pub noise_floor: f64,
    /// Residual exceeds 5× the noise floor, e.g. two merged lines.
    pub flagged: bool,
}

pub fn lorentzian(x: f64, center: f64, fwhm: f64, amplitude: f64, offset: f64) -> f64 {
    let u = 2.0 * (x - center) / fwhm;
    amplitude / (1.0 + u * u) + offset
}

/// Point-to-point noise estimated from second differences, which removes
/// smooth line shapes: 1.4826·median|Δ²y|/√6.
pub fn noise_floor(y: &[f64]) -> f64 {
    let d2: Vec<f64> = y.windows(3).map(|w| (w[0] - 2.0 * w[1] + w[2]).abs()).collect();
    1.4826 * median(&d2) / 6f64.sqrt()
}

fn to_mhz(width: f64, unit: &str) -> Result<f64, ExperimentError> {
    match unit {
        MHZ => Ok(width),
        RAD_PER_US => Ok(width / TAU),
        other => Err(ExperimentError::InvalidParameter(format!("cannot express a width in `{other}` as MHz"))),
    }
}

pub fn fit_lorentzian_xy(x: &[f64], y: &[f64], unit: &str) -> Result<LorentzianFit, ExperimentError> {
    let n = x.len();
    if n < 5 || y.len() != n || x.windows(2).any(|w| !(w[1] > w[0])) || y.iter().any(|v| !v.is_finite()) {
        return Err(ExperimentError::InvalidParameter("need ≥ 5 points on an increasing axis".into()));
    }
    let edge = (n / 20).max(1);
    let offset0 = 0.5 * (y[..edge].iter().sum::<f64>() + y[n - edge..].iter().sum::<f64>()) / edge as f64;
    let (imax, &ymax) = y.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty");
    let amp0 = ymax - offset0;
    let half = offset0 + 0.5 * amp0;
    let above: Vec<usize> = (0..n).filter(|&i| y[i] >= half).collect();
    let width0 = (x[*above.last().unwrap_or(&imax)] - x[*above.first().unwrap_or(&imax)]).max(x[1] - x[0]);

    let p0 = [x[imax], width0, amp0, offset0];
    let span = amp0.abs().max(1e-300);
    let opts = LmOptions {
        scales: Some(vec![width0, width0, span, span]),
        ..LmOptions::default()
    };
    let bounds = [Bound::FREE, Bound::positive(), Bound::FREE, Bound::FREE];
    let fit = levenberg_marquardt(
        |p| Some(x.iter().zip(y).map(|(&t, &v)| lorentzian(t, p[0], p[1], p[2], p[3]) - v).collect()),
        &p0,
        &bounds,
        &opts,
    )?;
    let floor = noise_floor(y);
    Ok(LorentzianFit {
        center: fit.params[0],
        fwhm: fit.params[1],
        fwhm_mhz: to_mhz(fit.params[1], unit)?,
        amplitude: fit.params[2],
        offset: fit.params[3],
        residual_rms: fit.residual_rms,
        noise_floor: floor,
        flagged: fit.residual_rms > MERGED_PEAK_FACTOR * floor,
    })
}

pub fn fit_lorentzian(spectrum: &ScanResult) -> Result<LorentzianFit, ExperimentError> {
    if spectrum.is_map() {
        return Err(ExperimentError::InvalidParameter("Lorentzian fits need a one-dimensional spectrum".into()));
    }
    fit_lorentzian_xy(&spectrum.axis1.values, &spectrum.values, &spectrum.axis1.unit)
}
