//! Ramsey and Hahn-echo sequences with ideal instantaneous pulses.

use rayon::prelude::*;

use crate::error::SpinDynamicsError;
use crate::noise::{check_grid, draw, NoiseKind, NoiseModel};
use crate::rng::{stream_rng, ECHO_STREAM, RAMSEY_STREAM};

/// Fine-grid points per correlation time used to integrate OU phases.
pub const DEFAULT_POINTS_PER_TAU_C: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct SpinSequenceResult {
    /// Pulse duration or free-evolution time, μs.
    pub x: Vec<f64>,
    pub signal: Vec<f64>,
    pub n_samples: usize,
    pub stderr: Vec<f64>,
}

impl SpinSequenceResult {
    pub fn deterministic(x: Vec<f64>, signal: Vec<f64>) -> Self {
        let n = x.len();
        Self {
            x,
            signal,
            n_samples: 1,
            stderr: vec![0.0; n],
        }
    }

    /// Maps populations to PL contrast.
    pub fn with_readout(mut self, readout: &ReadoutContrast) -> Self {
        let span = (readout.bright - readout.dark).abs();
        for (s, e) in self.signal.iter_mut().zip(&mut self.stderr) {
            *s = readout.apply(*s);
            *e *= span;
        }
        self
    }
}

/// Affine population-to-signal map; the default is the identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadoutContrast {
    pub dark: f64,
    pub bright: f64,
}

impl Default for ReadoutContrast {
    fn default() -> Self {
        Self { dark: 0.0, bright: 1.0 }
    }
}

impl ReadoutContrast {
    pub fn apply(&self, population: f64) -> f64 {
        self.dark + (self.bright - self.dark) * population
    }
}

/// Accumulated phase ∫₀ᵗ ε dt of one shot, known at a fixed set of nodes.
enum ShotPhase {
    Static(f64),
    Path { nodes: Vec<f64>, integral: Vec<f64> },
}

impl ShotPhase {
    fn at(&self, t: f64) -> f64 {
        match self {
            ShotPhase::Static(eps) => eps * t,
            ShotPhase::Path { nodes, integral } => {
                let k = nodes.partition_point(|&n| n < t);
                integral[k]
            }
        }
    }
}

fn phase_nodes(taus: &[f64]) -> Vec<f64> {
    let mut nodes: Vec<f64> = std::iter::once(0.0).chain(taus.iter().flat_map(|&t| [t, 0.5 * t])).collect();
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    nodes
}

fn draw_phase(noise: &NoiseModel, nodes: &[f64], points_per_tau_c: usize, rng: &mut rand_chacha::ChaCha8Rng) -> ShotPhase {
    let NoiseKind::OrnsteinUhlenbeck { tau_c } = noise.kind else {
        return ShotPhase::Static(draw(noise, &[0.0], rng)[0]);
    };
    let h = tau_c / points_per_tau_c as f64;
    let mut fine = vec![nodes[0]];
    let mut node_at = vec![0];
    for w in nodes.windows(2) {
        let m = ((w[1] - w[0]) / h).ceil().max(1.0) as usize;
        for k in 1..=m {
            fine.push(if k == m { w[1] } else { w[0] + (w[1] - w[0]) * k as f64 / m as f64 });
        }
        node_at.push(fine.len() - 1);
    }
    let eps = draw(noise, &fine, rng);
    let mut cumulative = vec![0.0; fine.len()];
    for k in 1..fine.len() {
        cumulative[k] = cumulative[k - 1] + 0.5 * (fine[k] - fine[k - 1]) * (eps[k] + eps[k - 1]);
    }
    ShotPhase::Path {
        nodes: nodes.to_vec(),
        integral: node_at.into_iter().map(|i| cumulative[i]).collect(),
    }
}

fn validate(taus: &[f64], noise: &NoiseModel, n_samples: usize, points_per_tau_c: usize) -> Result<(), SpinDynamicsError> {
    noise.validate()?;
    if n_samples == 0 || points_per_tau_c == 0 {
        return Err(SpinDynamicsError::InvalidParameter("n_samples and points per τ_c must be ≥ 1".into()));
    }
    let mut sorted = taus.to_vec();
    sorted.sort_by(f64::total_cmp);
    check_grid(&sorted)
}

fn monte_carlo(
    taus: &[f64],
    noise: &NoiseModel,
    n_samples: usize,
    stream: u64,
    points_per_tau_c: usize,
    phase: impl Fn(&ShotPhase, f64) -> f64 + Sync,
) -> Result<SpinSequenceResult, SpinDynamicsError> {
    validate(taus, noise, n_samples, points_per_tau_c)?;
    let nodes = phase_nodes(taus);
    let shots: Vec<Vec<f64>> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(noise.seed, stream, i);
            let shot = draw_phase(noise, &nodes, points_per_tau_c, &mut rng);
            taus.iter().map(|&t| 0.5 * (1.0 + phase(&shot, t).cos())).collect()
        })
        .collect();

    let n = n_samples as f64;
    let mut signal = vec![0.0; taus.len()];
    for shot in &shots {
        for (s, v) in signal.iter_mut().zip(shot) {
            *s += v;
        }
    }
    signal.iter_mut().for_each(|s| *s /= n);
    let mut stderr = vec![0.0; taus.len()];
    if n_samples > 1 {
        for shot in &shots {
            for ((e, v), m) in stderr.iter_mut().zip(shot).zip(&signal) {
                *e += (v - m) * (v - m);
            }
        }
        stderr.iter_mut().for_each(|e| *e = (*e / (n - 1.0) / n).sqrt());
    }
    Ok(SpinSequenceResult {
        x: taus.to_vec(),
        signal,
        n_samples,
        stderr,
    })
}

/// Ramsey fringe ½(1 + ⟨cos φ⟩) with φ = detuning·τ + ∫₀^τ ε dt.
pub fn ramsey(taus: &[f64], detuning: f64, noise: &NoiseModel, n_samples: usize) -> Result<SpinSequenceResult, SpinDynamicsError> {
    ramsey_with_resolution(taus, detuning, noise, n_samples, DEFAULT_POINTS_PER_TAU_C)
}

pub fn ramsey_with_resolution(
    taus: &[f64],
    detuning: f64,
    noise: &NoiseModel,
    n_samples: usize,
    points_per_tau_c: usize,
) -> Result<SpinSequenceResult, SpinDynamicsError> {
    monte_carlo(taus, noise, n_samples, RAMSEY_STREAM, points_per_tau_c, |shot, t| detuning * t + shot.at(t))
}

/// Hahn echo with the π pulse at τ/2: φ = ∫₀^{τ/2} ε dt − ∫_{τ/2}^τ ε dt.
pub fn hahn_echo(taus: &[f64], noise: &NoiseModel, n_samples: usize) -> Result<SpinSequenceResult, SpinDynamicsError> {
    hahn_echo_with_resolution(taus, noise, n_samples, DEFAULT_POINTS_PER_TAU_C)
}

pub fn hahn_echo_with_resolution(
    taus: &[f64],
    noise: &NoiseModel,
    n_samples: usize,
    points_per_tau_c: usize,
) -> Result<SpinSequenceResult, SpinDynamicsError> {
    monte_carlo(taus, noise, n_samples, ECHO_STREAM, points_per_tau_c, |shot, t| {
        2.0 * shot.at(0.5 * t) - shot.at(t)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn grid(end: f64, n: usize) -> Vec<f64> {
        (0..=n).map(|k| end * k as f64 / n as f64).collect()
    }

    #[test]
    fn noiseless_ramsey_is_a_cosine() {
        let taus = grid(30.0, 60);
        let r = ramsey(&taus, TAU * 0.1, &NoiseModel::none(), 1).unwrap();
        for (t, s) in taus.iter().zip(&r.signal) {
            assert!((s - 0.5 * (1.0 + (TAU * 0.1 * t).cos())).abs() < 1e-15);
        }
        assert!((r.signal[20] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_delay_gives_unit_signal() {
        for noise in [NoiseModel::quasi_static(0.3, 4), NoiseModel::ornstein_uhlenbeck(0.2, 5.0, 4)] {
            assert_eq!(ramsey(&[0.0, 1.0], 0.7, &noise, 50).unwrap().signal[0], 1.0);
            assert_eq!(hahn_echo(&[0.0, 1.0], &noise, 50).unwrap().signal[0], 1.0);
        }
    }

    #[test]
    fn static_noise_is_refocused() {
        let r = hahn_echo(&grid(200.0, 20), &NoiseModel::quasi_static(0.5, 1), 200).unwrap();
        assert!(r.signal.iter().all(|&s| (s - 1.0).abs() < 1e-12));
    }

    #[test]
    fn invalid_inputs() {
        assert!(ramsey(&[1.0], 0.0, &NoiseModel::none(), 0).is_err());
        assert!(ramsey(&[-1.0], 0.0, &NoiseModel::none(), 1).is_err());
        assert!(hahn_echo(&[1.0], &NoiseModel::ornstein_uhlenbeck(1.0, 0.0, 0), 1).is_err());
    }

    #[test]
    fn readout_map_is_affine() {
        let r = SpinSequenceResult::deterministic(vec![0.0, 1.0], vec![0.0, 1.0]).with_readout(&ReadoutContrast { dark: 0.7, bright: 1.0 });
        assert_eq!(r.signal, vec![0.7, 1.0]);
    }
}
