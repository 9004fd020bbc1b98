//! Two-dimensional generalized Bessel functions for an ω + 2ω drive.

use quantum_core::Complex64;

use crate::bessel::{bessel_j_ladder, from_ladder};

const TRUNCATION: f64 = 1e-15;

/// Largest k with |J_k(x)| ≥ 1e-15 (at least ⌈|x|⌉).
fn truncation_order(ladder: &[f64], x: f64) -> usize {
    let floor = x.abs().ceil() as usize;
    ladder
        .iter()
        .enumerate()
        .rev()
        .find(|(k, j)| *k <= floor || j.abs() >= TRUNCATION)
        .map_or(0, |(k, _)| k)
}

/// 𝒥ₙ(x₁, x₂; φ) = Σ_k J_{n−2k}(x₁) J_k(x₂) e^{−ikφ}, the n-th Fourier
/// coefficient (1/2π)∫ exp(−i[x₁ sin θ + x₂ sin(2θ + φ)]) e^{inθ} dθ.
pub fn generalized_bessel_2d(n: i64, x1: f64, x2: f64, phi: f64) -> Complex64 {
    let ladder2 = bessel_j_ladder(x2.abs().ceil() as usize + 40, x2);
    let kmax = truncation_order(&ladder2, x2) as i64;
    let reach = (n.unsigned_abs() as usize) + 2 * kmax as usize;
    let ladder1 = bessel_j_ladder(reach, x1);
    (-kmax..=kmax)
        .map(|k| {
            let w = from_ladder(&ladder1, n - 2 * k) * from_ladder(&ladder2, k);
            Complex64::from_polar(w, -(k as f64) * phi)
        })
        .sum()
}

/// 𝒥ₙ for all |n| ≤ n_max, indexed by n + n_max.
pub fn generalized_bessel_2d_ladder(n_max: usize, x1: f64, x2: f64, phi: f64) -> Vec<Complex64> {
    let ladder2 = bessel_j_ladder(x2.abs().ceil() as usize + 40, x2);
    let kmax = truncation_order(&ladder2, x2) as i64;
    let ladder1 = bessel_j_ladder(n_max + 2 * kmax as usize, x1);
    let n_max = n_max as i64;
    (-n_max..=n_max)
        .map(|n| {
            (-kmax..=kmax)
                .map(|k| {
                    let w = from_ladder(&ladder1, n - 2 * k) * from_ladder(&ladder2, k);
                    Complex64::from_polar(w, -(k as f64) * phi)
                })
                .sum()
        })
        .collect()
}
