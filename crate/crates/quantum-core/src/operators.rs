//! Standard spin-1 and two-level operators.
//!
//! Spin-1 matrices use the Sz eigenbasis ordered (|+1⟩, |0⟩, |−1⟩).
//! Two-level operators use the basis (|g⟩, |e⟩) with σz = |e⟩⟨e| − |g⟩⟨g|.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::hermitian::{FrequencyUnit, HermitianOperator};
use crate::matrix::{ComplexMatrix, I, ONE, ZERO};

pub struct Spin1 {
    pub sx: HermitianOperator,
    pub sy: HermitianOperator,
    pub sz: HermitianOperator,
}

fn dimensionless(m: ComplexMatrix) -> HermitianOperator {
    HermitianOperator::new(m, FrequencyUnit::AngularRadPerUs).expect("operator is Hermitian by construction")
}

pub fn spin1_operators() -> Spin1 {
    let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let ri = I * FRAC_1_SQRT_2;
    let sx = ComplexMatrix::new(3, 3, vec![ZERO, r, ZERO, r, ZERO, r, ZERO, r, ZERO]).unwrap();
    let sy = ComplexMatrix::new(3, 3, vec![ZERO, -ri, ZERO, ri, ZERO, -ri, ZERO, ri, ZERO]).unwrap();
    let sz = ComplexMatrix::diagonal(&[1.0, 0.0, -1.0]);
    Spin1 {
        sx: dimensionless(sx),
        sy: dimensionless(sy),
        sz: dimensionless(sz),
    }
}

/// S₊ = Sx + iSy for spin 1.
pub fn spin1_raising() -> ComplexMatrix {
    let s = Complex64::new(std::f64::consts::SQRT_2, 0.0);
    ComplexMatrix::new(3, 3, vec![ZERO, s, ZERO, ZERO, ZERO, s, ZERO, ZERO, ZERO]).unwrap()
}

pub fn spin1_lowering() -> ComplexMatrix {
    spin1_raising().adjoint()
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::new(2, 2, vec![ZERO, ONE, ONE, ZERO]).unwrap()
}

/// Chosen so that [σx, σy] = 2iσz with σz = diag(−1, 1).
pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::new(2, 2, vec![ZERO, I, -I, ZERO]).unwrap()
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::diagonal(&[-1.0, 1.0])
}

/// σ₊ = |e⟩⟨g|.
pub fn sigma_plus() -> ComplexMatrix {
    ComplexMatrix::new(2, 2, vec![ZERO, ZERO, ONE, ZERO]).unwrap()
}

pub fn sigma_minus() -> ComplexMatrix {
    sigma_plus().adjoint()
}

/// Basis ket |k⟩ in dimension n.
pub fn ket(n: usize, k: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; n];
    v[k] = ONE;
    v
}

/// |i⟩⟨j| in dimension n.
pub fn transition(n: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    m[(i, j)] = ONE;
    m
}

pub fn projector(n: usize, k: usize) -> ComplexMatrix {
    transition(n, k, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::jacobi_eigh;

    #[test]
    fn sz_spectrum() {
        let s = spin1_operators();
        let e = jacobi_eigh(s.sz.matrix()).unwrap();
        assert_eq!(e.values, vec![-1.0, 0.0, 1.0]);
        assert!((s.sx.matrix()[(0, 1)].re - FRAC_1_SQRT_2).abs() < 1e-16);
    }

    #[test]
    fn su2_algebra() {
        let s = spin1_operators();
        let (x, y, z) = (s.sx.matrix(), s.sy.matrix(), s.sz.matrix());
        let cases = [(x, y, z), (y, z, x), (z, x, y)];
        for (a, b, c) in cases {
            let comm = a.commutator(b).unwrap();
            assert!((&comm - &c.scale(I)).norm_inf() < 1e-14);
        }
        let s2 = &(&(x * x) + &(y * y)) + &(z * z);
        assert!((&s2 - &ComplexMatrix::identity(3).scale_real(2.0)).max_abs() < 1e-14);
    }

    #[test]
    fn ladder_matches_cartesian() {
        let s = spin1_operators();
        let sp = s.sx.matrix() + &s.sy.matrix().scale(I);
        assert!((&sp - &spin1_raising()).max_abs() < 1e-15);
    }

    #[test]
    fn pauli_conventions() {
        let comm = sigma_x().commutator(&sigma_y()).unwrap();
        assert!((&comm - &sigma_z().scale(I * 2.0)).max_abs() < 1e-15);
        let sp = (&sigma_x() + &sigma_y().scale(I)).scale_real(0.5);
        assert_eq!(sp, sigma_plus());
        assert_eq!(sigma_plus().try_mul_vec(&ket(2, 0)).unwrap(), ket(2, 1));
    }
}
