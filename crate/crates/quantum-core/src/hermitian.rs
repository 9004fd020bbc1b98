use crate::eigen::{jacobi_eigh, Eigensystem};
use crate::error::QuantumError;
use crate::matrix::ComplexMatrix;

pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Frequency unit carried by a Hamiltonian-like operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrequencyUnit {
    /// rad/μs, the internal convention for dynamics.
    AngularRadPerUs,
    /// MHz (H/h), used by the ground-state spin Hamiltonian.
    LinearMHz,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    unit: FrequencyUnit,
}

impl HermitianOperator {
    /// Accepts `matrix` if ‖M − M†‖∞ ≤ 1e-12·max(1, ‖M‖∞).
    pub fn new(matrix: ComplexMatrix, unit: FrequencyUnit) -> Result<Self, QuantumError> {
        let deviation = matrix.hermiticity_error().ok_or(QuantumError::NotSquare {
            rows: matrix.rows(),
            cols: matrix.cols(),
        })?;
        if deviation > HERMITIAN_TOLERANCE * matrix.norm_inf().max(1.0) {
            return Err(QuantumError::NotHermitian { deviation });
        }
        Ok(Self { matrix, unit })
    }

    pub fn angular(matrix: ComplexMatrix) -> Result<Self, QuantumError> {
        Self::new(matrix, FrequencyUnit::AngularRadPerUs)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn unit(&self) -> FrequencyUnit {
        self.unit
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Converts between MHz and rad/μs.
    pub fn to_unit(&self, unit: FrequencyUnit) -> Self {
        let factor = match (self.unit, unit) {
            (FrequencyUnit::LinearMHz, FrequencyUnit::AngularRadPerUs) => std::f64::consts::TAU,
            (FrequencyUnit::AngularRadPerUs, FrequencyUnit::LinearMHz) => 1.0 / std::f64::consts::TAU,
            _ => 1.0,
        };
        Self {
            matrix: self.matrix.scale_real(factor),
            unit,
        }
    }
}

pub fn eigendecompose_hermitian(h: &HermitianOperator) -> Result<Eigensystem, QuantumError> {
    jacobi_eigh(h.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            HermitianOperator::angular(m),
            Err(QuantumError::NotHermitian { .. })
        ));
        assert!(HermitianOperator::angular(ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn tolerance_scales_with_norm() {
        let mut m = ComplexMatrix::diagonal(&[1e6, -1e6]);
        m[(0, 1)] = Complex64::new(1e-8, 0.0);
        assert!(HermitianOperator::angular(m).is_ok());
    }

    #[test]
    fn unit_conversion_round_trips() {
        let h = HermitianOperator::new(ComplexMatrix::diagonal(&[1.0, 2.0]), FrequencyUnit::LinearMHz).unwrap();
        let back = h.to_unit(FrequencyUnit::AngularRadPerUs).to_unit(FrequencyUnit::LinearMHz);
        assert!((back.matrix() - h.matrix()).max_abs() < 1e-15);
    }
}
