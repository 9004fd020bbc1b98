//! Time-resolved optical Rabi traces and Bloch-parameter fits.

use lindblad_solver::bloch::{EXCITED, GROUND};
use lindblad_solver::{evolve_with_observables, three_level_bloch_model, BlochParams, PulseEnvelope, StepLimits};
use quantum_core::lsq::{levenberg_marquardt, Bound, LmFailure, LmFit, LmOptions};
use quantum_core::operators::projector;
use quantum_core::DensityMatrix;
use rand_distr::{Distribution, Poisson};
use spin_dynamics::rng::stream_rng;

use crate::emission::DEFAULT_STEP_FACTOR;
use crate::error::ExperimentError;
use crate::scan::{Axis, ScanResult, PHOTONS, US};

/// Random stream for photon-count sampling.
pub const COUNTS_STREAM: u64 = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiTraceSettings {
    /// Optical Rabi frequency Ω, rad/μs.
    pub omega: f64,
    /// Laser detuning δ, rad/μs.
    pub delta: f64,
    /// Rectangular pulse from 0 to `pulse_length`, μs.
    pub pulse_length: f64,
    /// Dark time recorded after the pulse, μs.
    pub tail: f64,
    /// Histogram bin width, μs.
    pub bin: f64,
}

impl RabiTraceSettings {
    /// 80 ns pulse, 40 ns tail, 1 ns bins.
    pub fn standard(omega: f64, delta: f64) -> Self {
        Self {
            omega,
            delta,
            pulse_length: 0.080,
            tail: 0.040,
            bin: 0.001,
        }
    }

    pub fn bin_count(&self) -> usize {
        ((self.pulse_length + self.tail) / self.bin).round() as usize
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        let ok = self.omega >= 0.0
            && self.delta.is_finite()
            && self.pulse_length > 0.0
            && self.tail >= 0.0
            && self.bin > 0.0
            && [self.omega, self.pulse_length, self.tail, self.bin].iter().all(|v| v.is_finite());
        let n = (self.pulse_length + self.tail) / self.bin;
        if !ok || (n - n.round()).abs() > 1e-6 || n.round() < 1.0 {
            return Err(ExperimentError::InvalidParameter(
                "need Ω ≥ 0, pulse > 0, tail ≥ 0 and a bin width dividing pulse + tail".into(),
            ));
        }
        Ok(())
    }
}

/// Photons emitted per bin, ∫ ρₑₑ/T₁ dt, for a system starting in |g⟩.
pub fn simulate_bins(settings: &RabiTraceSettings, bloch: &BlochParams) -> Result<Vec<f64>, ExperimentError> {
    let envelope = PulseEnvelope::rectangular(0.0, settings.pulse_length)?;
    let model = three_level_bloch_model(settings.omega, settings.delta, bloch, Some(envelope))?;
    let nu = settings.omega + settings.delta.abs();
    let mut dt = StepLimits::of(&model).max_step().min(settings.bin);
    if nu > 0.0 {
        dt = dt.min(DEFAULT_STEP_FACTOR / nu);
    }
    let edges: Vec<f64> = (0..=settings.bin_count()).map(|k| k as f64 * settings.bin).collect();
    let traj = evolve_with_observables(&DensityMatrix::basis_state(3, GROUND), &model, &edges, dt, &[projector(3, EXCITED)])?;
    Ok(traj.integrals.windows(2).map(|w| (w[1][0] - w[0][0]) / bloch.t1).collect())
}

/// Emission trace on bin centres.
pub fn optical_rabi_trace(settings: &RabiTraceSettings, bloch: &BlochParams) -> Result<ScanResult, ExperimentError> {
    settings.validate()?;
    let values = simulate_bins(settings, bloch)?;
    let centres = (0..values.len()).map(|k| (k as f64 + 0.5) * settings.bin).collect();
    Ok(ScanResult::new(Axis::new("time", US, centres), None, ("emission", PHOTONS), values)?.with_metadata("experiment", "optical-rabi"))
}

/// Poisson-sampled histogram with `total_counts` expected counts overall.
pub fn poisson_counts(trace: &ScanResult, total_counts: f64, seed: u64) -> Result<ScanResult, ExperimentError> {
    let sum: f64 = trace.values.iter().sum();
    if !(sum > 0.0 && total_counts > 0.0) || trace.values.iter().any(|v| *v < 0.0) {
        return Err(ExperimentError::InvalidParameter("need a non-negative trace with positive total".into()));
    }
    let scale = total_counts / sum;
    let mut rng = stream_rng(seed, COUNTS_STREAM, 0);
    let mut out = trace.clone();
    for v in out.values.iter_mut() {
        let mean = *v * scale;
        *v = if mean > 0.0 {
            Poisson::new(mean).expect("positive mean").sample(&mut rng)
        } else {
            0.0
        };
    }
    out.value_name = "counts".into();
    out.value_unit = "counts".into();
    Ok(out.with_metadata("total_counts", total_counts).with_metadata("seed", seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    Uniform,
    /// Residuals divided by √max(counts, 1).
    Poisson,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlochFit {
    pub t1: f64,
    /// INFINITY when the fitted pure-dephasing rate is zero.
    pub t2_star: f64,
    /// (1/(2T₁) + 1/T₂*)⁻¹.
    pub t2: f64,
    pub gamma: f64,
    pub amplitude: f64,
    pub offset: f64,
    pub residual_rms: f64,
}

impl BlochFit {
    /// T₂/(2T₁); 1 for lifetime-limited coherence.
    pub fn lifetime_ratio(&self) -> f64 {
        self.t2 / (2.0 * self.t1)
    }
}

/// Decay time from a log-linear fit to the post-pulse tail.
fn tail_lifetime(settings: &RabiTraceSettings, t: &[f64], y: &[f64]) -> Option<f64> {
    let peak = y.iter().cloned().fold(0.0, f64::max);
    let pts: Vec<(f64, f64)> = t
        .iter()
        .zip(y)
        .filter(|(x, v)| **x > settings.pulse_length + 1.5 * settings.bin && **v > 1e-3 * peak)
        .map(|(x, v)| (*x, v.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope < 0.0).then(|| -1.0 / slope)
}

/// Fits (T₁, 1/T₂*, Γ, amplitude, offset) with the simulator as forward model,
/// from three jittered starts.
pub fn fit_bloch_parameters(trace: &ScanResult, settings: &RabiTraceSettings, weighting: Weighting) -> Result<BlochFit, ExperimentError> {
    settings.validate()?;
    if trace.is_map() || trace.values.len() != settings.bin_count() {
        return Err(ExperimentError::InvalidParameter(format!(
            "trace has {} bins, settings imply {}",
            trace.values.len(),
            settings.bin_count()
        )));
    }
    let rabi_periods = settings.omega * settings.pulse_length / std::f64::consts::TAU;
    if rabi_periods < 3.0 {
        return Err(ExperimentError::InvalidParameter(format!("pulse covers {rabi_periods:.2} Rabi periods, need ≥ 3")));
    }
    let y = &trace.values;
    let sigma: Vec<f64> = match weighting {
        Weighting::Uniform => vec![1.0; y.len()],
        Weighting::Poisson => y.iter().map(|v| v.max(1.0).sqrt()).collect(),
    };
    let t1_guess = tail_lifetime(settings, &trace.axis1.values, y).unwrap_or(settings.pulse_length / 5.0);

    let forward = |p: &[f64]| -> Option<Vec<f64>> {
        let t2_star = if p[1] > 0.0 { 1.0 / p[1] } else { f64::INFINITY };
        simulate_bins(settings, &BlochParams::new(p[0], t2_star, p[2])).ok()
    };
    let bounds = [Bound::new(1e-3 * t1_guess, 1e3 * t1_guess), Bound::non_negative(), Bound::non_negative(), Bound::FREE, Bound::FREE];
    let jitter = [[1.0, 1.0, 1.0], [0.8, 2.0, 0.5], [1.25, 0.5, 2.0]];
    let mut best: Option<Result<LmFit, LmFailure>> = None;
    for j in jitter {
        let (t1, dephasing, gamma) = (t1_guess * j[0], 0.2 / t1_guess * j[1], 0.05 / t1_guess * j[2]);
        let Some(shape) = forward(&[t1, dephasing, gamma]) else { continue };
        let amp = y.iter().sum::<f64>() / shape.iter().sum::<f64>();
        let p0 = [t1, dephasing, gamma, amp, 0.0];
        let level = y.iter().cloned().fold(0.0, f64::max).max(1e-300);
        let opts = LmOptions {
            scales: Some(vec![t1, 1.0 / t1, 1.0 / t1, amp.abs().max(1e-300), 1e-2 * level]),
            ..LmOptions::default()
        };
        let outcome = levenberg_marquardt(
            |p| {
                let m = forward(p)?;
                Some(m.iter().zip(y).zip(&sigma).map(|((mi, yi), s)| (p[3] * mi + p[4] - yi) / s).collect())
            },
            &p0,
            &bounds,
            &opts,
        );
        let key = |o: &Result<LmFit, LmFailure>| match o {
            Ok(f) => (0, f.cost),
            Err(e) => (1, e.best.cost),
        };
        if best.as_ref().is_none_or(|b| {
            let (a, c) = (key(&outcome), key(b));
            a.0 < c.0 || (a.0 == c.0 && a.1 < c.1)
        }) {
            best = Some(outcome);
        }
    }
    let fit = best.ok_or_else(|| ExperimentError::InvalidParameter("forward model failed at every start".into()))??;
    let p = &fit.params;
    let t2_star = if p[1] > 0.0 { 1.0 / p[1] } else { f64::INFINITY };
    Ok(BlochFit {
        t1: p[0],
        t2_star,
        t2: 1.0 / (1.0 / (2.0 * p[0]) + p[1]),
        gamma: p[2],
        amplitude: p[3],
        offset: p[4],
        residual_rms: fit.residual_rms,
    })
}
