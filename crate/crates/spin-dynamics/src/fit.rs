//! Decay-envelope fits A·e^{−(τ/T)^p}·cos(ωτ + φ₀) + c.

use std::f64::consts::{PI, TAU};

use quantum_core::lsq::{levenberg_marquardt, Bound, LmFailure, LmFit, LmOptions};
use quantum_core::Complex64;

use crate::error::SpinDynamicsError;
use crate::sequences::SpinSequenceResult;

pub const MIN_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeShape {
    Gaussian,
    Exponential,
    Stretched,
}

impl EnvelopeShape {
    fn fixed_exponent(self) -> Option<f64> {
        match self {
            EnvelopeShape::Gaussian => Some(2.0),
            EnvelopeShape::Exponential => Some(1.0),
            EnvelopeShape::Stretched => None,
        }
    }
}

impl std::str::FromStr for EnvelopeShape {
    type Err = SpinDynamicsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gaussian" => Ok(EnvelopeShape::Gaussian),
            "exponential" => Ok(EnvelopeShape::Exponential),
            "stretched" => Ok(EnvelopeShape::Stretched),
            other => Err(SpinDynamicsError::InvalidParameter(format!(
                "unknown envelope `{other}` (expected gaussian, exponential or stretched)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeFit {
    /// Decay time T, μs.
    pub decay_time: f64,
    pub exponent: f64,
    pub amplitude: f64,
    /// Fringe frequency ω (rad/μs); zero without oscillation.
    pub frequency: f64,
    pub phase: f64,
    pub offset: f64,
    pub residual_rms: f64,
}

const A: usize = 0;
const T: usize = 1;
const P: usize = 2;
const W: usize = 3;
const PHI: usize = 4;
const C: usize = 5;

fn model(full: &[f64; 6], x: f64) -> f64 {
    let env = (-(x / full[T]).powf(full[P])).exp();
    full[A] * env * (full[W] * x + full[PHI]).cos() + full[C]
}

/// Frequency of the strongest Fourier component of y − c, with its phase.
fn periodogram(x: &[f64], y: &[f64], c: f64) -> (f64, f64) {
    let span = x[x.len() - 1] - x[0];
    let nyquist = PI * (x.len() - 1) as f64 / span;
    let step = PI / (4.0 * span);
    let mut best = (0.0, 0.0, 0.0);
    let mut w = step;
    while w <= nyquist {
        let s: Complex64 = x.iter().zip(y).map(|(&t, &v)| Complex64::from_polar(v - c, -w * t)).sum();
        if s.norm() > best.0 {
            best = (s.norm(), w, s.arg());
        }
        w += step;
    }
    (best.1, best.2)
}

fn validate(x: &[f64], y: &[f64]) -> Result<(), SpinDynamicsError> {
    if x.len() != y.len() || x.len() < MIN_POINTS {
        return Err(SpinDynamicsError::InvalidParameter(format!(
            "need at least {MIN_POINTS} (x, y) pairs, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) || x.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SpinDynamicsError::InvalidParameter("x must be finite and strictly increasing, y finite".into()));
    }
    Ok(())
}

/// Fits the envelope model to (x, y). With `oscillating` the cosine factor
/// is free; otherwise ω = φ₀ = 0.
pub fn fit_envelope_xy(x: &[f64], y: &[f64], shape: EnvelopeShape, oscillating: bool) -> Result<EnvelopeFit, SpinDynamicsError> {
    validate(x, y)?;
    let n = x.len();
    let span = x[n - 1] - x[0];
    let tail = &y[n - (n / 10).max(1)..];
    let tail_mean = tail.iter().sum::<f64>() / tail.len() as f64;
    let mean = y.iter().sum::<f64>() / n as f64;

    let mut free = vec![A, T];
    if shape.fixed_exponent().is_none() {
        free.push(P);
    }
    if oscillating {
        free.extend([W, PHI]);
    }
    free.push(C);

    let mut starts: Vec<[f64; 6]> = Vec::new();
    let offsets = if oscillating { vec![mean, tail_mean] } else { vec![tail_mean, y[n - 1]] };
    let exponents = match shape.fixed_exponent() {
        Some(p) => vec![p],
        None => vec![1.0, 2.0],
    };
    for &c in &offsets {
        let (w, phi) = if oscillating { periodogram(x, y, c) } else { (0.0, 0.0) };
        let a = if oscillating {
            y.iter().map(|v| (v - c).abs()).fold(0.0, f64::max)
        } else {
            y[0] - c
        };
        let crossing = x.iter().zip(y).find(|(_, &v)| (v - c).abs() < a.abs() / std::f64::consts::E).map(|(&t, _)| t);
        let t0 = crossing.filter(|&t| t > 0.0).unwrap_or(span);
        for &p in &exponents {
            for scale in [1.0, 0.5, 2.0] {
                starts.push([a, t0 * scale, p, w, phi, c]);
            }
        }
    }

    let mut bounds = [Bound::FREE; 6];
    bounds[T] = Bound::positive();
    bounds[P] = Bound::new(0.2, 6.0);
    bounds[W] = Bound::non_negative();

    let mut best: Option<Result<LmFit, LmFailure>> = None;
    let mut best_full = [0.0; 6];
    for start in &starts {
        let p0: Vec<f64> = free.iter().map(|&i| start[i]).collect();
        let b: Vec<Bound> = free.iter().map(|&i| bounds[i]).collect();
        let amp = start[A].abs().max(1e-12);
        let scales: Vec<f64> = free
            .iter()
            .map(|&i| match i {
                A | C => amp,
                T => start[T],
                W => start[W].max(TAU / span),
                _ => 1.0,
            })
            .collect();
        let opts = LmOptions {
            scales: Some(scales),
            ..LmOptions::default()
        };
        let expand = |p: &[f64]| {
            let mut full = *start;
            for (&i, &v) in free.iter().zip(p) {
                full[i] = v;
            }
            full
        };
        let outcome = levenberg_marquardt(
            |p| {
                let full = expand(p);
                let r: Vec<f64> = x.iter().zip(y).map(|(&t, &v)| model(&full, t) - v).collect();
                r.iter().all(|v| v.is_finite()).then_some(r)
            },
            &p0,
            &b,
            &opts,
        );
        let cost = |o: &Result<LmFit, LmFailure>| match o {
            Ok(f) => (0, f.cost),
            Err(e) => (1, e.best.cost),
        };
        let better = match &best {
            None => true,
            Some(prev) => {
                let (a, b) = (cost(&outcome), cost(prev));
                a.0 < b.0 || (a.0 == b.0 && a.1 < b.1)
            }
        };
        if better {
            best_full = expand(match &outcome {
                Ok(f) => &f.params,
                Err(e) => &e.best.params,
            });
            best = Some(outcome);
        }
    }

    let fit = best.expect("at least one start")?;
    let mut p = best_full;
    if oscillating && p[A] < 0.0 {
        p[A] = -p[A];
        p[PHI] += PI;
    }
    if oscillating {
        p[PHI] = (p[PHI] + PI).rem_euclid(TAU) - PI;
    }
    Ok(EnvelopeFit {
        decay_time: p[T],
        exponent: p[P],
        amplitude: p[A],
        frequency: p[W],
        phase: p[PHI],
        offset: p[C],
        residual_rms: fit.residual_rms,
    })
}

pub fn fit_envelope(result: &SpinSequenceResult, shape: EnvelopeShape, oscillating: bool) -> Result<EnvelopeFit, SpinDynamicsError> {
    fit_envelope_xy(&result.x, &result.signal, shape, oscillating)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(end: f64, n: usize) -> Vec<f64> {
        (0..n).map(|k| end * k as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn noiseless_gaussian() {
        let x = grid(200.0, 60);
        let y: Vec<f64> = x.iter().map(|t| (-(t / 74.0f64).powi(2)).exp()).collect();
        let f = fit_envelope_xy(&x, &y, EnvelopeShape::Gaussian, false).unwrap();
        assert!((f.decay_time / 74.0 - 1.0).abs() < 1e-3, "{f:?}");
    }

    #[test]
    fn stretched_exponent_of_an_exponential() {
        let x = grid(400.0, 80);
        let y: Vec<f64> = x.iter().map(|t| (-t / 100.0f64).exp()).collect();
        let f = fit_envelope_xy(&x, &y, EnvelopeShape::Stretched, false).unwrap();
        assert!((f.exponent - 1.0).abs() < 0.05, "{f:?}");
        assert!((f.decay_time / 100.0 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn oscillating_fringe() {
        let x = grid(150.0, 301);
        let w = TAU * 0.1;
        let y: Vec<f64> = x.iter().map(|t| 0.5 + 0.5 * (-(t / 74.0f64).powi(2)).exp() * (w * t).cos()).collect();
        let f = fit_envelope_xy(&x, &y, EnvelopeShape::Gaussian, true).unwrap();
        assert!((f.decay_time / 74.0 - 1.0).abs() < 1e-3, "{f:?}");
        assert!((f.frequency / w - 1.0).abs() < 1e-4);
        assert!(f.phase.abs() < 1e-3);
    }

    #[test]
    fn too_few_points() {
        assert!(fit_envelope_xy(&[0.0, 1.0], &[1.0, 0.5], EnvelopeShape::Gaussian, false).is_err());
    }
}
