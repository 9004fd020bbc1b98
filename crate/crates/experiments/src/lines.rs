//! Spin-conserving PLE line positions from ground- and excited-state fine structure.

use quantum_core::eigendecompose_hermitian;
use spin_hamiltonian::zefoz::{MINUS, PLUS, ZERO};
use spin_hamiltonian::{zefoz_basis, zefoz_hamiltonian};

use crate::error::ExperimentError;

/// Zero-field splittings in MHz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FineStructureParams {
    pub d_gs: f64,
    pub e_gs: f64,
    pub d_es: f64,
    pub e_es: f64,
}

impl FineStructureParams {
    /// Ground state from its |0⟩↔|+⟩ frequency D + E and |+⟩↔|−⟩ splitting 2E.
    pub fn from_ground_transitions(zero_plus: f64, plus_minus: f64, d_es: f64, e_es: f64) -> Self {
        let e_gs = plus_minus / 2.0;
        Self {
            d_gs: zero_plus - e_gs,
            e_gs,
            d_es,
            e_es,
        }
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        if [self.d_gs, self.e_gs, self.d_es, self.e_es].iter().any(|v| !v.is_finite()) {
            return Err(ExperimentError::InvalidParameter("fine-structure parameters must be finite".into()));
        }
        Ok(())
    }
}

/// Energies (MHz) of (|+⟩, |0⟩, |−⟩), indexed like the zero-field basis,
/// from numerical diagonalization.
pub fn level_energies(d: f64, e: f64) -> Result<[f64; 3], ExperimentError> {
    let eig = eigendecompose_hermitian(&zefoz_hamiltonian(d, e))?;
    let basis = zefoz_basis(d, e);
    let mut out = [0.0; 3];
    let mut taken = [false; 3];
    for label in [ZERO, PLUS, MINUS] {
        let target = basis.state(label);
        let k = (0..3)
            .filter(|&k| !taken[k])
            .max_by(|&a, &b| {
                let w = |k: usize| (0..3).map(|i| eig.vectors[(i, k)].conj() * target[i]).sum::<quantum_core::Complex64>().norm_sqr();
                w(a).total_cmp(&w(b))
            })
            .expect("three eigenvectors");
        taken[k] = true;
        out[label] = eig.values[k];
    }
    Ok(out)
}

/// Detunings (MHz) of the |0⟩, |+⟩ and |−⟩ lines relative to the |0⟩ line.
pub fn predict_ple_lines(fs: &FineStructureParams) -> Result<[f64; 3], ExperimentError> {
    fs.validate()?;
    let gs = level_energies(fs.d_gs, fs.e_gs)?;
    let es = level_energies(fs.d_es, fs.e_es)?;
    let line = |k: usize| (es[k] - gs[k]) - (es[ZERO] - gs[ZERO]);
    Ok([line(ZERO), line(PLUS), line(MINUS)])
}
