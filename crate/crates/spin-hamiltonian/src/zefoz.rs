//! Effective Hamiltonian at zero effective field and its eigenbasis.
//!
//! The rotated basis is ordered (|+⟩, |0⟩, |−⟩) with
//! |±⟩ = (|+1⟩ ± |−1⟩)/√2.

use std::f64::consts::FRAC_1_SQRT_2;

use quantum_core::{ComplexMatrix, FrequencyUnit, HermitianOperator};

use crate::hamiltonian::electron_hamiltonian;
use crate::params::SpinSystemParams;

pub const PLUS: usize = 0;
pub const ZERO: usize = 1;
pub const MINUS: usize = 2;

#[derive(Debug, Clone)]
pub struct ZefozBasis {
    pub d: f64,
    pub e: f64,
    /// Energies of (|0⟩, |+⟩, |−⟩) = (0, D+E, D−E) in MHz.
    pub energies: [f64; 3],
    /// Columns are |+⟩, |0⟩, |−⟩ in the (|+1⟩, |0⟩, |−1⟩) basis.
    pub u: ComplexMatrix,
    pub sx: ComplexMatrix,
    pub sy: ComplexMatrix,
    pub sz: ComplexMatrix,
}

impl ZefozBasis {
    pub fn energy_zero(&self) -> f64 {
        self.energies[0]
    }

    pub fn energy_plus(&self) -> f64 {
        self.energies[1]
    }

    pub fn energy_minus(&self) -> f64 {
        self.energies[2]
    }

    /// (ν₀↔₊, ν₊↔₋) = (D+E, 2E).
    pub fn transitions(&self) -> (f64, f64) {
        (self.energy_plus() - self.energy_zero(), self.energy_plus() - self.energy_minus())
    }

    /// Basis vector for `PLUS`, `ZERO` or `MINUS`.
    pub fn state(&self, k: usize) -> Vec<quantum_core::Complex64> {
        self.u.column(k)
    }
}

/// [[D, 0, E], [0, 0, 0], [E, 0, D]] in the (|+1⟩, |0⟩, |−1⟩) basis (MHz).
pub fn zefoz_hamiltonian(d: f64, e: f64) -> HermitianOperator {
    let m = ComplexMatrix::from_real(3, 3, &[d, 0.0, e, 0.0, 0.0, 0.0, e, 0.0, d]).unwrap();
    HermitianOperator::new(m, FrequencyUnit::LinearMHz).unwrap()
}

pub fn zefoz_transform() -> ComplexMatrix {
    let r = FRAC_1_SQRT_2;
    ComplexMatrix::from_real(3, 3, &[r, 0.0, r, 0.0, 1.0, 0.0, r, 0.0, -r]).unwrap()
}

pub fn zefoz_basis(d: f64, e: f64) -> ZefozBasis {
    let u = zefoz_transform();
    let ud = u.adjoint();
    let s = quantum_core::spin1_operators();
    let rotate = |m: &ComplexMatrix| &(&ud * m) * &u;
    ZefozBasis {
        d,
        e,
        energies: [0.0, d + e, d - e],
        sx: rotate(s.sx.matrix()),
        sy: rotate(s.sy.matrix()),
        sz: rotate(s.sz.matrix()),
        u,
    }
}

/// The zero-effective-field electron Hamiltonian shifted so |0⟩ sits at 0;
/// equals `zefoz_hamiltonian(D, E)`.
pub fn shifted_electron_hamiltonian(d: f64, e: f64) -> ComplexMatrix {
    let h = electron_hamiltonian(&SpinSystemParams::new(d, e));
    &h + &ComplexMatrix::identity(3).scale_real(2.0 * d / 3.0)
}
