//! Small dense solvers (Gaussian elimination).

use num_complex::Complex64;

use crate::error::QuantumError;
use crate::matrix::ComplexMatrix;

/// Solves A x = b for real square A with partial pivoting.
pub fn solve_real(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>, QuantumError> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .ok_or(QuantumError::Singular)?;
        if a[pivot][col] == 0.0 || !a[pivot][col].is_finite() {
            return Err(QuantumError::Singular);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = ((i + 1)..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Ok(x)
}

/// Numerical rank of a complex matrix by full-pivot elimination; pivots
/// below `tol·max|a_ij|` count as zero.
pub fn numerical_rank(m: &ComplexMatrix, tol: f64) -> usize {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<Complex64>> = (0..rows).map(|i| (0..cols).map(|j| m[(i, j)]).collect()).collect();
    let scale = m.max_abs();
    if scale == 0.0 {
        return 0;
    }
    let mut rank = 0;
    for step in 0..rows.min(cols) {
        let mut best = (step, step, 0.0);
        for (i, row) in a.iter().enumerate().skip(step) {
            for (j, z) in row.iter().enumerate().skip(step) {
                if z.norm() > best.2 {
                    best = (i, j, z.norm());
                }
            }
        }
        if best.2 <= tol * scale {
            break;
        }
        a.swap(step, best.0);
        for row in a.iter_mut() {
            row.swap(step, best.1);
        }
        for i in (step + 1)..rows {
            let f = a[i][step] / a[step][step];
            for j in step..cols {
                let v = a[step][j];
                a[i][j] -= f * v;
            }
        }
        rank += 1;
    }
    rank
}

/// Solves A x = b for complex square A with full pivoting.
pub fn solve_complex(m: &ComplexMatrix, b: &[Complex64]) -> Result<Vec<Complex64>, QuantumError> {
    let n = m.rows();
    if !m.is_square() || b.len() != n {
        return Err(QuantumError::DimensionMismatch {
            op: "solve",
            left: m.shape(),
            right: (b.len(), 1),
        });
    }
    let mut a: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect();
    let mut rhs = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    for step in 0..n {
        let mut best = (step, step, 0.0);
        for (i, row) in a.iter().enumerate().skip(step) {
            for (j, z) in row.iter().enumerate().skip(step) {
                if z.norm() > best.2 {
                    best = (i, j, z.norm());
                }
            }
        }
        if best.2 == 0.0 {
            return Err(QuantumError::Singular);
        }
        a.swap(step, best.0);
        rhs.swap(step, best.0);
        for row in a.iter_mut() {
            row.swap(step, best.1);
        }
        perm.swap(step, best.1);
        for i in (step + 1)..n {
            let f = a[i][step] / a[step][step];
            for j in step..n {
                let v = a[step][j];
                a[i][j] -= f * v;
            }
            let v = rhs[step];
            rhs[i] -= f * v;
        }
    }
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let s: Complex64 = ((i + 1)..n).map(|k| a[i][k] * y[k]).sum();
        y[i] = (rhs[i] - s) / a[i][i];
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for (k, &p) in perm.iter().enumerate() {
        x[p] = y[k];
    }
    Ok(x)
}
