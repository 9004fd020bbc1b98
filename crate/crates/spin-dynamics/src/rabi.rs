//! Resonant microwave Rabi driving of the ground-state spin in the
//! zero-effective-field basis.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use quantum_core::{jacobi_eigh, Complex64, ComplexMatrix};
use spin_hamiltonian::zefoz::{MINUS, PLUS, ZERO};
use spin_hamiltonian::zefoz_basis;

use crate::error::SpinDynamicsError;
use crate::sequences::SpinSequenceResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinTransition {
    /// |0⟩ ↔ |+⟩ at D + E, driven through S'x.
    ZeroPlus,
    /// |+⟩ ↔ |−⟩ at 2E, driven through S'z.
    PlusMinus,
}

impl SpinTransition {
    pub fn label(self) -> &'static str {
        match self {
            SpinTransition::ZeroPlus => "zero_plus",
            SpinTransition::PlusMinus => "plus_minus",
        }
    }

    /// (initial, target) basis indices.
    pub fn states(self) -> (usize, usize) {
        match self {
            SpinTransition::ZeroPlus => (ZERO, PLUS),
            SpinTransition::PlusMinus => (PLUS, MINUS),
        }
    }

    pub fn default_weights(self) -> FieldWeights {
        match self {
            SpinTransition::ZeroPlus => FieldWeights { x: 1.0, y: 0.0, z: 0.0 },
            SpinTransition::PlusMinus => FieldWeights { x: 0.0, y: 0.0, z: 1.0 },
        }
    }
}

impl fmt::Display for SpinTransition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SpinTransition {
    type Err = SpinDynamicsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zero_plus" => Ok(SpinTransition::ZeroPlus),
            "plus_minus" => Ok(SpinTransition::PlusMinus),
            other => Err(SpinDynamicsError::UnknownTransition(other.to_string())),
        }
    }
}

/// Components of the microwave field along the rotated spin axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldWeights {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RabiModel {
    /// Driven pair only, resonant rotating frame.
    TwoLevel,
    /// All three levels in the frame of the drive (rotating-wave), with
    /// zero-field splittings `d`, `e` in MHz.
    FullThreeLevel { d: f64, e: f64, weights: FieldWeights },
}

fn coupling(weights: FieldWeights) -> ComplexMatrix {
    let b = zefoz_basis(0.0, 0.0);
    &(&b.sx.scale_real(weights.x) + &b.sy.scale_real(weights.y)) + &b.sz.scale_real(weights.z)
}

fn two_level_hamiltonian(transition: SpinTransition, omega: f64) -> ComplexMatrix {
    let (a, b) = transition.states();
    let m = coupling(transition.default_weights());
    let mut h = ComplexMatrix::zeros(3, 3);
    h[(a, b)] = m[(a, b)] * (omega / 2.0);
    h[(b, a)] = m[(b, a)] * (omega / 2.0);
    h
}

fn three_level_hamiltonian(transition: SpinTransition, omega: f64, d: f64, e: f64, weights: FieldWeights) -> Result<ComplexMatrix, SpinDynamicsError> {
    if !(d.is_finite() && e.is_finite()) {
        return Err(SpinDynamicsError::InvalidParameter("D and E must be finite".into()));
    }
    let mut energy = [0.0; 3];
    energy[ZERO] = 0.0;
    energy[PLUS] = TAU * (d + e);
    energy[MINUS] = TAU * (d - e);
    let (a, b) = transition.states();
    let (lower, upper) = if energy[a] <= energy[b] { (a, b) } else { (b, a) };
    let drive = energy[upper] - energy[lower];
    if drive <= 0.0 {
        return Err(SpinDynamicsError::InvalidParameter("driven pair is degenerate".into()));
    }
    let spectator = 3 - a - b;
    let mut frame = [0.0; 3];
    frame[upper] = drive;
    let offset = energy[spectator] - energy[lower];
    frame[spectator] = if offset.abs() <= (offset - drive).abs() { 0.0 } else { drive };

    let m = coupling(weights);
    let mut h = ComplexMatrix::zeros(3, 3);
    for j in 0..3 {
        h[(j, j)] = Complex64::new(energy[j] - energy[lower] - frame[j], 0.0);
        for k in 0..3 {
            if j != k && ((frame[j] - frame[k]).abs() - drive).abs() <= 1e-9 * drive {
                h[(j, k)] = m[(j, k)] * (omega / 2.0);
            }
        }
    }
    Ok(h)
}

/// Target-state population after a resonant pulse of each duration (μs).
pub fn spin_rabi(
    transition: SpinTransition,
    omega_mw: f64,
    durations: &[f64],
    model: &RabiModel,
) -> Result<SpinSequenceResult, SpinDynamicsError> {
    if !omega_mw.is_finite() || durations.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(SpinDynamicsError::InvalidParameter("Rabi frequency and durations must be finite, durations ≥ 0".into()));
    }
    let h = match *model {
        RabiModel::TwoLevel => two_level_hamiltonian(transition, omega_mw),
        RabiModel::FullThreeLevel { d, e, weights } => three_level_hamiltonian(transition, omega_mw, d, e, weights)?,
    };
    let eig = jacobi_eigh(&h)?;
    let (start, target) = transition.states();
    // Amplitudes ⟨target|v_k⟩⟨v_k|start⟩.
    let weights: Vec<Complex64> = (0..3)
        .map(|k| eig.vectors[(target, k)] * eig.vectors[(start, k)].conj())
        .collect();
    let signal = durations
        .iter()
        .map(|&t| {
            let amp: Complex64 = weights
                .iter()
                .zip(&eig.values)
                .map(|(w, &l)| w * Complex64::from_polar(1.0, -l * t))
                .sum();
            amp.norm_sqr()
        })
        .collect();
    Ok(SpinSequenceResult::deterministic(durations.to_vec(), signal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn labels_round_trip() {
        for t in [SpinTransition::ZeroPlus, SpinTransition::PlusMinus] {
            assert_eq!(t.label().parse::<SpinTransition>().unwrap(), t);
        }
        assert!(matches!("zero_minus".parse::<SpinTransition>(), Err(SpinDynamicsError::UnknownTransition(_))));
    }

    #[test]
    fn pi_and_two_pi_pulses() {
        let omega = TAU * 2.5;
        for t in [SpinTransition::ZeroPlus, SpinTransition::PlusMinus] {
            let r = spin_rabi(t, omega, &[PI / omega, TAU / omega], &RabiModel::TwoLevel).unwrap();
            assert!((r.signal[0] - 1.0).abs() < 1e-9, "{t}");
            assert!(r.signal[1].abs() < 1e-9, "{t}");
        }
    }

    #[test]
    fn drive_elements_have_unit_magnitude() {
        let m = coupling(SpinTransition::ZeroPlus.default_weights());
        assert!((m[(ZERO, PLUS)].norm() - 1.0).abs() < 1e-12);
        let m = coupling(SpinTransition::PlusMinus.default_weights());
        assert!((m[(MINUS, PLUS)].norm() - 1.0).abs() < 1e-12);
    }
}
