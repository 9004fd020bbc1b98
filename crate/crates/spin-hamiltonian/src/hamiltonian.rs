//! Ground-state spin-1 Hamiltonian on the electron ⊗ nuclei space.
//!
//! Basis ordering: electron index major (|+1⟩, |0⟩, |−1⟩), then nuclei in
//! configuration order, each nucleus ordered (|↑⟩, |↓⟩). Nuclear spin
//! operators are Pauli matrices (eigenvalues ±1).

use quantum_core::matrix::{I, ONE, ZERO};
use quantum_core::operators::{spin1_lowering, spin1_raising};
use quantum_core::{spin1_operators, tensor_product, ComplexMatrix, FrequencyUnit, HermitianOperator};

use crate::error::SpinError;
use crate::params::SpinSystemParams;

fn nuclear_pauli() -> [ComplexMatrix; 3] {
    [
        ComplexMatrix::new(2, 2, vec![ZERO, ONE, ONE, ZERO]).unwrap(),
        ComplexMatrix::new(2, 2, vec![ZERO, -I, I, ZERO]).unwrap(),
        ComplexMatrix::diagonal(&[1.0, -1.0]),
    ]
}

/// Pauli operator `op` acting on nucleus `k` of `n`.
fn embed_nuclear(op: &ComplexMatrix, k: usize, n: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::identity(1);
    for i in 0..n {
        let factor = if i == k { op.clone() } else { ComplexMatrix::identity(2) };
        out = tensor_product(&out, &factor);
    }
    out
}

/// Electron-only part D(Sz² − 2/3) + (E/2)(S₊² + S₋²) + gμ_B B·S (MHz).
pub fn electron_hamiltonian(p: &SpinSystemParams) -> ComplexMatrix {
    let s = spin1_operators();
    let (sx, sy, sz) = (s.sx.matrix(), s.sy.matrix(), s.sz.matrix());
    let sp = spin1_raising();
    let sm = spin1_lowering();
    let zfs = (&(sz * sz) - &ComplexMatrix::identity(3).scale_real(2.0 / 3.0)).scale_real(p.d);
    let transverse = (&(&sp * &sp) + &(&sm * &sm)).scale_real(p.e / 2.0);
    let ge = p.gamma_e();
    let zeeman = &(&sx.scale_real(ge * p.b[0]) + &sy.scale_real(ge * p.b[1])) + &sz.scale_real(ge * p.b[2]);
    &(&zfs + &transverse) + &zeeman
}

/// H/h in MHz on the 3·2ᴺ-dimensional space. Nuclear Zeeman terms are
/// omitted.
pub fn build_ground_hamiltonian(p: &SpinSystemParams) -> Result<HermitianOperator, SpinError> {
    p.validate()?;
    let n = p.hyperfine.len();
    let nd = p.nuclear_dim();
    let mut h = tensor_product(&electron_hamiltonian(p), &ComplexMatrix::identity(nd));

    let s = spin1_operators();
    let electron = [s.sx.matrix().clone(), s.sy.matrix().clone(), s.sz.matrix().clone()];
    let pauli = nuclear_pauli();
    for (k, tensor) in p.hyperfine.iter().enumerate() {
        let nuclear: Vec<ComplexMatrix> = pauli.iter().map(|sig| embed_nuclear(sig, k, n)).collect();
        for (a, s_a) in electron.iter().enumerate() {
            for (b, i_b) in nuclear.iter().enumerate() {
                let coeff = tensor.0[a][b];
                if coeff != 0.0 {
                    h = &h + &tensor_product(s_a, i_b).scale_real(coeff);
                }
            }
        }
    }
    Ok(HermitianOperator::new(h, FrequencyUnit::LinearMHz)?)
}

/// The 3×3 electron block with all nuclei fixed to one basis configuration.
/// Exact for hyperfine tensors with only a zz component.
pub fn nuclear_block(h: &ComplexMatrix, nuclear_dim: usize, config: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(3, 3, |i, j| h[(i * nuclear_dim + config, j * nuclear_dim + config)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{HyperfineTensor, MU_B_MHZ_PER_MT};
    use quantum_core::eigendecompose_hermitian;

    #[test]
    fn zero_parameters_give_zero_matrix() {
        let h = build_ground_hamiltonian(&SpinSystemParams::new(0.0, 0.0)).unwrap();
        assert_eq!(h.matrix().max_abs(), 0.0);
    }

    #[test]
    fn zero_field_levels() {
        let (d, e) = (1350.0, 18.4);
        let h = build_ground_hamiltonian(&SpinSystemParams::new(d, e)).unwrap();
        let eig = eigendecompose_hermitian(&h).unwrap();
        let shifted: Vec<f64> = eig.values.iter().map(|v| v - eig.values[0]).collect();
        assert!((eig.values[0] + 2.0 * d / 3.0).abs() < 1e-9);
        assert!((shifted[1] - (d - e)).abs() < 1e-9);
        assert!((shifted[2] - (d + e)).abs() < 1e-9);
        assert!((h.matrix()[(0, 2)].re - e).abs() < 1e-12);
    }

    #[test]
    fn field_negates_hyperfine_on_up_branch() {
        let a = 0.7;
        let bz = -a / (2.0 * MU_B_MHZ_PER_MT);
        let p = SpinSystemParams::new(1333.0, 18.0).with_bz(bz).with_nucleus(HyperfineTensor::zz(a));
        let h = build_ground_hamiltonian(&p).unwrap();
        let block = nuclear_block(h.matrix(), 2, 0);
        let bare = electron_hamiltonian(&SpinSystemParams::new(1333.0, 18.0));
        assert!((&block - &bare).max_abs() < 1e-12);
        assert_eq!(h.dim(), 6);
    }

    #[test]
    fn asymmetric_hyperfine_rejected() {
        let mut t = HyperfineTensor::zz(1.0);
        t.0[0][1] = 0.5;
        let p = SpinSystemParams::new(1.0, 0.0).with_nucleus(t);
        assert!(build_ground_hamiltonian(&p).is_err());
    }

    #[test]
    fn two_nuclei_dimension_and_hermiticity() {
        let mut t = HyperfineTensor::zz(1.0);
        t.0[0][0] = 0.3;
        t.0[0][2] = 0.1;
        t.0[2][0] = 0.1;
        let p = SpinSystemParams::new(1300.0, 15.0)
            .with_field([0.2, -0.1, 1.0])
            .with_nucleus(t)
            .with_nucleus(HyperfineTensor::zz(-2.0));
        let h = build_ground_hamiltonian(&p).unwrap();
        assert_eq!(h.dim(), 12);
        assert!(h.matrix().hermiticity_error().unwrap() < 1e-12);
    }
}
