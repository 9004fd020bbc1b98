//! Transition-frequency dispersion versus B_z and location of the ZEFOZ field.

use quantum_core::{jacobi_eigh, Complex64, ComplexMatrix};

use crate::analytic::NuclearBranch;
use crate::error::SpinError;
use crate::hamiltonian::{build_ground_hamiltonian, nuclear_block};
use crate::params::SpinSystemParams;
use crate::zefoz::{zefoz_basis, MINUS, PLUS, ZERO};

pub const DERIVATIVE_STEP_MT: f64 = 1e-3;
pub const DEFAULT_BRACKET_MT: (f64, f64) = (-50.0, 50.0);

#[derive(Debug, Clone)]
pub struct Dispersion {
    pub bz: Vec<f64>,
    /// ν₀↔₊ in MHz.
    pub zero_plus: Vec<f64>,
    /// ν₊↔₋ in MHz.
    pub plus_minus: Vec<f64>,
}

fn config_index(p: &SpinSystemParams, branch: NuclearBranch) -> usize {
    match branch {
        NuclearBranch::Up => 0,
        NuclearBranch::Down => p.nuclear_dim() - 1,
    }
}

/// Field at which the effective longitudinal field vanishes on `branch`.
pub fn zero_effective_field(p: &SpinSystemParams, branch: NuclearBranch) -> f64 {
    let a: f64 = p.hyperfine.iter().map(|t| t.a_zz()).sum();
    -branch.sign() * a / p.gamma_e()
}

/// Eigen-decomposition of the electron block on `branch` at field `bz`.
fn block_eigen(p: &SpinSystemParams, branch: NuclearBranch, bz: f64) -> Result<(Vec<f64>, ComplexMatrix), SpinError> {
    let mut q = p.clone();
    q.b[2] = bz;
    let h = build_ground_hamiltonian(&q)?;
    let block = nuclear_block(h.matrix(), q.nuclear_dim(), config_index(&q, branch));
    let eig = jacobi_eigh(&block)?;
    Ok((eig.values, eig.vectors))
}

fn overlap2(a: &[Complex64], m: &ComplexMatrix, k: usize) -> f64 {
    a.iter().enumerate().map(|(i, &x)| x.conj() * m[(i, k)]).sum::<Complex64>().norm_sqr()
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// perm[label] = eigenvector column maximizing total overlap with `refs`.
fn assign(refs: &[Vec<Complex64>; 3], vectors: &ComplexMatrix) -> [usize; 3] {
    let mut best = (PERMUTATIONS[0], f64::NEG_INFINITY);
    for perm in PERMUTATIONS {
        let score: f64 = (0..3).map(|l| overlap2(&refs[l], vectors, perm[l])).sum();
        if score > best.1 {
            best = (perm, score);
        }
    }
    best.0
}

/// Labeled transition frequencies along a strictly increasing B_z grid.
/// Labels are fixed by overlap with the ZEFOZ eigenbasis at the grid point
/// nearest zero effective field and carried outward by maximum overlap.
pub fn transition_dispersion(
    p: &SpinSystemParams,
    bz_grid: &[f64],
    branch: NuclearBranch,
) -> Result<Dispersion, SpinError> {
    if let Some(i) = bz_grid.windows(2).position(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
        return Err(SpinError::GridNotMonotone(i + 1));
    }
    let n = bz_grid.len();
    if n == 0 {
        return Ok(Dispersion {
            bz: Vec::new(),
            zero_plus: Vec::new(),
            plus_minus: Vec::new(),
        });
    }
    let eigs = bz_grid
        .iter()
        .map(|&bz| block_eigen(p, branch, bz))
        .collect::<Result<Vec<_>, _>>()?;

    let target = zero_effective_field(p, branch);
    let start = (0..n)
        .min_by(|&i, &j| (bz_grid[i] - target).abs().total_cmp(&(bz_grid[j] - target).abs()))
        .unwrap();

    let zb = zefoz_basis(p.d, p.e);
    let labels = [PLUS, ZERO, MINUS];
    let refs = labels.map(|k| zb.state(k));
    let mut perms = vec![[0usize; 3]; n];
    perms[start] = assign(&refs, &eigs[start].1);

    let column = |i: usize, k: usize| eigs[i].1.column(k);
    for i in (start + 1)..n {
        let prev = [0, 1, 2].map(|l| column(i - 1, perms[i - 1][l]));
        perms[i] = assign(&prev, &eigs[i].1);
    }
    for i in (0..start).rev() {
        let prev = [0, 1, 2].map(|l| column(i + 1, perms[i + 1][l]));
        perms[i] = assign(&prev, &eigs[i].1);
    }

    let mut zero_plus = Vec::with_capacity(n);
    let mut plus_minus = Vec::with_capacity(n);
    for (i, (values, _)) in eigs.iter().enumerate() {
        let [ip, i0, im] = perms[i];
        zero_plus.push(values[ip] - values[i0]);
        plus_minus.push(values[ip] - values[im]);
    }
    Ok(Dispersion {
        bz: bz_grid.to_vec(),
        zero_plus,
        plus_minus,
    })
}

/// ν₀↔₊ at one field. |0⟩ is the eigenvector with the largest |0⟩ weight;
/// |+⟩ is the upper remaining level when E ≥ 0, otherwise the lower one.
pub fn zero_plus_frequency(p: &SpinSystemParams, branch: NuclearBranch, bz: f64) -> Result<f64, SpinError> {
    let (values, vectors) = block_eigen(p, branch, bz)?;
    let i0 = (0..3)
        .max_by(|&a, &b| vectors[(1, a)].norm_sqr().total_cmp(&vectors[(1, b)].norm_sqr()))
        .unwrap();
    let others: Vec<usize> = (0..3).filter(|&k| k != i0).collect();
    let ip = if p.e >= 0.0 { others[1] } else { others[0] };
    Ok(values[ip] - values[i0])
}

fn derivative(p: &SpinSystemParams, branch: NuclearBranch, bz: f64) -> Result<f64, SpinError> {
    let h = DERIVATIVE_STEP_MT;
    Ok((zero_plus_frequency(p, branch, bz + h)? - zero_plus_frequency(p, branch, bz - h)?) / (2.0 * h))
}

pub fn find_zefoz_field(p: &SpinSystemParams, branch: NuclearBranch) -> Result<f64, SpinError> {
    find_zefoz_field_in(p, branch, DEFAULT_BRACKET_MT)
}

/// Root of dν₀↔₊/dB_z by bisection on the central-difference derivative.
pub fn find_zefoz_field_in(p: &SpinSystemParams, branch: NuclearBranch, bracket: (f64, f64)) -> Result<f64, SpinError> {
    if p.hyperfine.is_empty() {
        return Err(SpinError::Precondition("ZEFOZ search needs at least one nucleus".into()));
    }
    let (mut lo, mut hi) = bracket;
    let mut flo = derivative(p, branch, lo)?;
    let fhi = derivative(p, branch, hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(SpinError::NoSignChange { lower: lo, upper: hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo < 1e-12 {
            break;
        }
        let fm = derivative(p, branch, mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
