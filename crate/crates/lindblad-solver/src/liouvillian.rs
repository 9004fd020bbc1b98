//! Vectorized Liouvillian with row-major index (i, j) ↦ i·dim + j.

use quantum_core::{Complex64, ComplexMatrix};

use crate::model::{CollapseOperator, LindbladModel};

const MINUS_I: Complex64 = Complex64::new(0.0, -1.0);

/// Superoperator of −i[H, ·], optionally without the diagonal of H.
pub fn commutator_superoperator(h: &ComplexMatrix, include_diagonal: bool) -> ComplexMatrix {
    let d = h.rows();
    let mut l = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let row = i * d + j;
            for k in 0..d {
                if include_diagonal || k != i {
                    l[(row, k * d + j)] += MINUS_I * h[(i, k)];
                }
                if include_diagonal || k != j {
                    l[(row, i * d + k)] -= MINUS_I * h[(k, j)];
                }
            }
        }
    }
    l
}

/// Superoperator of C·C† − ½{C†C, ·}.
pub fn dissipator_superoperator(c: &CollapseOperator) -> ComplexMatrix {
    let m = &c.matrix;
    let d = m.rows();
    let cdc = &m.adjoint() * m;
    let mut l = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let row = i * d + j;
            for k in 0..d {
                for l_ in 0..d {
                    let mut v = m[(i, k)] * m[(j, l_)].conj();
                    if j == l_ {
                        v -= cdc[(i, k)] * 0.5;
                    }
                    if i == k {
                        v -= cdc[(l_, j)] * 0.5;
                    }
                    l[(row, k * d + l_)] += v;
                }
            }
        }
    }
    l
}

/// Full generator ℒ(t) acting on vec(ρ).
pub fn liouvillian(model: &LindbladModel, t: f64) -> ComplexMatrix {
    let mut l = commutator_superoperator(model.hamiltonian(t).matrix(), true);
    for c in model.collapse() {
        l = &l + &dissipator_superoperator(c);
    }
    l
}

pub fn vectorize(rho: &ComplexMatrix) -> Vec<Complex64> {
    rho.as_slice().to_vec()
}

pub fn unvectorize(v: &[Complex64], dim: usize) -> ComplexMatrix {
    ComplexMatrix::new(dim, dim, v.to_vec()).expect("dim² entries")
}
