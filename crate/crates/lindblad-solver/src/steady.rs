use quantum_core::linalg::{numerical_rank, solve_complex};
use quantum_core::{Complex64, ComplexMatrix, DensityMatrix};

use crate::error::SolverError;
use crate::liouvillian::{liouvillian, unvectorize};
use crate::model::LindbladModel;
use crate::solver::{evolve, StepLimits};

const RANK_TOLERANCE: f64 = 1e-10;
const RELAXATION_MULTIPLE: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteadyStateKind {
    /// One-dimensional kernel; the state is unique.
    Unique,
    /// Population ends in a level that nothing drives or empties.
    AbsorbingTrap,
    /// Several stationary states; the one reached from |0⟩ is returned.
    DegenerateKernel,
}

#[derive(Debug, Clone)]
pub struct SteadyState {
    pub state: DensityMatrix,
    pub kind: SteadyStateKind,
    pub kernel_dimension: usize,
}

impl SteadyState {
    pub fn is_trapped(&self) -> bool {
        self.kind == SteadyStateKind::AbsorbingTrap
    }
}

/// Levels with no Hamiltonian coupling and no outgoing jumps.
fn absorbing_levels(model: &LindbladModel) -> Vec<usize> {
    let h = model.static_hamiltonian();
    let d = model.dim();
    (0..d)
        .filter(|&k| (0..d).all(|j| j == k || (h[(k, j)].norm() == 0.0 && h[(j, k)].norm() == 0.0)))
        .filter(|&k| {
            model
                .collapse()
                .iter()
                .all(|c| (0..d).all(|j| j == k || c.matrix[(j, k)].norm() == 0.0))
        })
        .collect()
}

/// Components of vec(ρ) reachable from |0⟩⟨0| under ℒ.
fn reachable_from_ground(l: &ComplexMatrix) -> Vec<usize> {
    let n2 = l.rows();
    let mut seen = vec![false; n2];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(col) = stack.pop() {
        for row in 0..n2 {
            if !seen[row] && l[(row, col)].norm() > 0.0 {
                seen[row] = true;
                stack.push(row);
            }
        }
    }
    (0..n2).filter(|&c| seen[c]).collect()
}

/// Stationary state on the component subset `comps`, if it is unique there.
fn solve_on(l: &ComplexMatrix, comps: &[usize], d: usize) -> Result<Option<DensityMatrix>, SolverError> {
    let m = comps.len();
    let sub = ComplexMatrix::from_fn(m, m, |r, c| l[(comps[r], comps[c])]);
    if m - numerical_rank(&sub, RANK_TOLERANCE) != 1 {
        return Ok(None);
    }
    let mut a = sub;
    for (c, &full) in comps.iter().enumerate() {
        a[(0, c)] = if full % (d + 1) == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
    }
    let mut b = vec![Complex64::new(0.0, 0.0); m];
    b[0] = Complex64::new(1.0, 0.0);
    let x = solve_complex(&a, &b)?;
    let mut full = vec![Complex64::new(0.0, 0.0); d * d];
    for (&c, v) in comps.iter().zip(x) {
        full[c] = v;
    }
    let m = unvectorize(&full, d);
    let herm = ComplexMatrix::from_fn(d, d, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    Ok(Some(DensityMatrix::new(herm)?))
}

/// Solves ℒρ = 0 with tr ρ = 1. A degenerate kernel is resolved by the
/// state reached from |0⟩: first on the reachable subspace, then by
/// long-time evolution.
pub fn steady_state(model: &LindbladModel) -> Result<SteadyState, SolverError> {
    if !model.is_time_independent() {
        return Err(SolverError::TimeDependent);
    }
    let d = model.dim();
    let n2 = d * d;
    let l = liouvillian(model, 0.0);
    let kernel_dimension = n2 - numerical_rank(&l, RANK_TOLERANCE);
    let classify = |state: DensityMatrix| {
        let kind = if is_trapped(model, &state) {
            SteadyStateKind::AbsorbingTrap
        } else if kernel_dimension == 1 {
            SteadyStateKind::Unique
        } else {
            SteadyStateKind::DegenerateKernel
        };
        SteadyState {
            state,
            kind,
            kernel_dimension,
        }
    };

    let all: Vec<usize> = (0..n2).collect();
    let comps = if kernel_dimension == 1 { all } else { reachable_from_ground(&l) };
    if let Some(state) = solve_on(&l, &comps, d)? {
        return Ok(classify(state));
    }

    let t_end = RELAXATION_MULTIPLE * model.max_relaxation_time();
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(SolverError::InvalidModel("degenerate kernel without dissipation".into()));
    }
    let dt = 0.25 * StepLimits::of(model).max_step().min(t_end / 100.0);
    let traj = evolve(&DensityMatrix::basis_state(d, 0), model, &[0.0, t_end], dt)?;
    Ok(classify(traj.final_state().clone()))
}

/// All population sits in an absorbing level that the dynamics can reach.
fn is_trapped(model: &LindbladModel, state: &DensityMatrix) -> bool {
    absorbing_levels(model).into_iter().any(|k| {
        state.population(k) > 1.0 - 1e-6 && model.collapse().iter().any(|c| (0..model.dim()).any(|j| j != k && c.matrix[(k, j)].norm() > 0.0))
    })
}
