use num_complex::Complex64;

use crate::eigen::jacobi_eigh;
use crate::error::QuantumError;
use crate::matrix::ComplexMatrix;

pub const TRACE_TOLERANCE: f64 = 1e-9;
pub const POSITIVITY_TOLERANCE: f64 = 1e-9;
pub const HERMITICITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

/// Deviations of a candidate density matrix from physicality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Physicality {
    pub trace_error: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

pub fn physicality(m: &ComplexMatrix) -> Result<Physicality, QuantumError> {
    let hermiticity_error = m.hermiticity_error().ok_or(QuantumError::NotSquare {
        rows: m.rows(),
        cols: m.cols(),
    })?;
    let n = m.rows();
    let herm = ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let eig = jacobi_eigh(&herm)?;
    Ok(Physicality {
        trace_error: (m.trace() - Complex64::new(1.0, 0.0)).norm(),
        hermiticity_error,
        min_eigenvalue: eig.values.first().copied().unwrap_or(0.0),
    })
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self, QuantumError> {
        let p = physicality(&matrix)?;
        if p.hermiticity_error > HERMITICITY_TOLERANCE {
            return Err(QuantumError::NotHermitian {
                deviation: p.hermiticity_error,
            });
        }
        if p.trace_error > TRACE_TOLERANCE {
            return Err(QuantumError::BadTrace {
                trace: matrix.trace().re,
            });
        }
        if p.min_eigenvalue < -POSITIVITY_TOLERANCE {
            return Err(QuantumError::NotPositive {
                min_eigenvalue: p.min_eigenvalue,
            });
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix produced by an integrator that enforces its own,
    /// looser, tolerances.
    pub fn new_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    /// |ψ⟩⟨ψ| for a normalized ket.
    pub fn pure(psi: &[Complex64]) -> Result<Self, QuantumError> {
        Self::new(ComplexMatrix::outer(psi, psi))
    }

    pub fn basis_state(n: usize, k: usize) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        m[(k, k)] = Complex64::new(1.0, 0.0);
        Self { matrix: m }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn population(&self, k: usize) -> f64 {
        self.matrix[(k, k)].re
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.population(k)).collect()
    }

    pub fn coherence(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    /// tr(Oρ).
    pub fn expectation(&self, o: &ComplexMatrix) -> Complex64 {
        let n = self.dim();
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                s += o[(i, k)] * self.matrix[(k, i)];
            }
        }
        s
    }

    pub fn physicality(&self) -> Physicality {
        physicality(&self.matrix).expect("density matrix is square")
    }
}
