//! Classical detuning noise standing in for the nuclear spin bath.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::SpinDynamicsError;
use crate::rng::{stream_rng, NOISE_STREAM};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseKind {
    None,
    /// One Gaussian detuning per shot, constant within the shot.
    QuasiStatic,
    /// Stationary Gaussian process with autocorrelation σ²e^{−|t|/τ_c}.
    OrnsteinUhlenbeck { tau_c: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    /// rms detuning, rad/μs.
    pub sigma: f64,
    pub seed: u64,
}

impl NoiseModel {
    pub fn none() -> Self {
        Self {
            kind: NoiseKind::None,
            sigma: 0.0,
            seed: 0,
        }
    }

    pub fn quasi_static(sigma: f64, seed: u64) -> Self {
        Self {
            kind: NoiseKind::QuasiStatic,
            sigma,
            seed,
        }
    }

    /// Quasi-static noise whose Ramsey envelope is e^{−(τ/T₂*)²}, i.e. σ = √2/T₂*.
    pub fn from_t2_star(t2_star: f64, seed: u64) -> Self {
        Self::quasi_static(std::f64::consts::SQRT_2 / t2_star, seed)
    }

    pub fn ornstein_uhlenbeck(sigma: f64, tau_c: f64, seed: u64) -> Self {
        Self {
            kind: NoiseKind::OrnsteinUhlenbeck { tau_c },
            sigma,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), SpinDynamicsError> {
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(SpinDynamicsError::InvalidParameter(format!("noise sigma must be ≥ 0, got {}", self.sigma)));
        }
        if let NoiseKind::OrnsteinUhlenbeck { tau_c } = self.kind {
            if !(tau_c > 0.0 && tau_c.is_finite()) {
                return Err(SpinDynamicsError::InvalidParameter(format!("tau_c must be > 0, got {tau_c}")));
            }
        }
        Ok(())
    }
}

pub(crate) fn check_grid(times: &[f64]) -> Result<(), SpinDynamicsError> {
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(SpinDynamicsError::InvalidParameter("time grid must be non-negative and non-decreasing".into()));
    }
    Ok(())
}

/// Exact AR(1) discretization of the OU process on an increasing grid,
/// started from the stationary distribution.
pub(crate) fn ou_path(sigma: f64, tau_c: f64, times: &[f64], rng: &mut impl Rng) -> Vec<f64> {
    let mut out = Vec::with_capacity(times.len());
    let mut eps = sigma * rng.sample::<f64, _>(StandardNormal);
    let mut last = times.first().copied().unwrap_or(0.0);
    for &t in times {
        let a = (-(t - last) / tau_c).exp();
        eps = eps * a + sigma * (1.0 - a * a).sqrt() * rng.sample::<f64, _>(StandardNormal);
        out.push(eps);
        last = t;
    }
    out
}

pub(crate) fn draw(model: &NoiseModel, times: &[f64], rng: &mut impl Rng) -> Vec<f64> {
    match model.kind {
        NoiseKind::None => vec![0.0; times.len()],
        NoiseKind::QuasiStatic => vec![model.sigma * rng.sample::<f64, _>(StandardNormal); times.len()],
        NoiseKind::OrnsteinUhlenbeck { tau_c } => ou_path(model.sigma, tau_c, times, rng),
    }
}

/// One noise realization ε(t) on `times` for shot `shot`.
pub fn sample_noise(model: &NoiseModel, times: &[f64], shot: u64) -> Result<Vec<f64>, SpinDynamicsError> {
    model.validate()?;
    check_grid(times)?;
    let mut rng = stream_rng(model.seed, NOISE_STREAM, shot);
    Ok(draw(model, times, &mut rng))
}

/// x − 3 + 4e^{−x/2} − e^{−x}, accurate for small x.
fn echo_shape(x: f64) -> f64 {
    if x < 1e-3 {
        x * x * x / 12.0 - x.powi(4) / 32.0 + 7.0 * x.powi(5) / 960.0
    } else {
        4.0 * (-0.5 * x).exp_m1() - (-x).exp_m1() + x
    }
}

/// Echo decay exponent χ(τ) of OU noise; coherence is e^{−χ}.
pub fn ou_echo_chi(sigma: f64, tau_c: f64, tau: f64) -> f64 {
    sigma * sigma * tau_c * tau_c * echo_shape(tau / tau_c)
}

/// Local log-slope d ln χ / d ln τ at x = τ/τ_c; falls from 3 to 1.
fn echo_log_slope(x: f64) -> f64 {
    let g_prime = (-0.5 * x).exp_m1().powi(2);
    x * g_prime / echo_shape(x)
}

/// OU parameters (σ, τ_c) with χ(t2) = 1 and local decay exponent
/// `exponent` ∈ (1, 3) at τ = t2.
pub fn calibrate_ou_echo(t2: f64, exponent: f64) -> Result<(f64, f64), SpinDynamicsError> {
    if !(t2 > 0.0) || !(exponent > 1.0 && exponent < 3.0) {
        return Err(SpinDynamicsError::InvalidParameter(format!(
            "need t2 > 0 and exponent in (1, 3), got {t2}, {exponent}"
        )));
    }
    let (mut lo, mut hi) = ((1e-4f64).ln(), (1e6f64).ln());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if echo_log_slope(mid.exp()) > exponent {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = (0.5 * (lo + hi)).exp();
    let tau_c = t2 / x;
    let sigma = 1.0 / (tau_c * echo_shape(x).sqrt());
    Ok((sigma, tau_c))
}
