//! Closed-form eigensystem for one spin-1/2 nucleus with a longitudinal
//! field and a zz hyperfine coupling.

use quantum_core::Complex64;

use crate::error::SpinError;
use crate::params::SpinSystemParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NuclearBranch {
    Up,
    Down,
}

impl NuclearBranch {
    /// Pauli eigenvalue ±1.
    pub fn sign(self) -> f64 {
        match self {
            NuclearBranch::Up => 1.0,
            NuclearBranch::Down => -1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            NuclearBranch::Up => 0,
            NuclearBranch::Down => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElectronLevel {
    /// D + √((gμ_B C)² + E²).
    Upper,
    /// D − √((gμ_B C)² + E²).
    Lower,
    /// The |0⟩ level.
    Zero,
}

#[derive(Debug, Clone)]
pub struct AnalyticLevel {
    pub energy: f64,
    pub level: ElectronLevel,
    pub nuclear: NuclearBranch,
    /// Normalized state on the 6-dimensional electron ⊗ nucleus space.
    pub state: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct AnalyticSpectrum {
    pub levels: Vec<AnalyticLevel>,
    /// Constant to add to every energy to compare with the eigenvalues of
    /// `build_ground_hamiltonian` (its |0⟩ level sits at −2D/3).
    pub offset: f64,
}

impl AnalyticSpectrum {
    pub fn absolute_energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy + self.offset).collect()
    }
}

/// Effective longitudinal field C± = B_z ± A_zz/(gμ_B) in mT.
pub fn effective_field(p: &SpinSystemParams, branch: NuclearBranch) -> f64 {
    let a = p.hyperfine.first().map_or(0.0, |t| t.a_zz());
    p.b[2] + branch.sign() * a / p.gamma_e()
}

/// Coefficients (c₊₁, c₋₁) of the eigenvector with energy D + σ·s inside the
/// {|+1⟩, |−1⟩} block [[D+κ, E], [E, D−κ]], normalized.
fn block_vector(kappa: f64, e: f64, sigma: f64) -> (f64, f64) {
    let s = kappa.hypot(e);
    let lower = if sigma * kappa > 0.0 {
        // σs − κ loses precision here; rewrite as σE²/(s + |κ|).
        sigma * e * e / (s + kappa.abs())
    } else {
        sigma * s - kappa
    };
    let (x, y) = (e, lower);
    let norm = x.hypot(y);
    if norm == 0.0 {
        // E = 0 and κ on the side where |+1⟩ carries the level.
        if sigma > 0.0 || kappa < 0.0 {
            (1.0, 0.0)
        } else {
            (0.0, 1.0)
        }
    } else {
        (x / norm, y / norm)
    }
}

pub fn analytic_spectrum(p: &SpinSystemParams) -> Result<AnalyticSpectrum, SpinError> {
    p.validate()?;
    if p.hyperfine.len() != 1 {
        return Err(SpinError::Precondition(format!(
            "analytic spectrum needs exactly one nucleus, got {}",
            p.hyperfine.len()
        )));
    }
    if p.b[0] != 0.0 || p.b[1] != 0.0 {
        return Err(SpinError::Precondition("transverse field must be zero".into()));
    }
    if !p.hyperfine[0].is_zz_only() {
        return Err(SpinError::Precondition("only the A_zz hyperfine component is supported".into()));
    }

    let mut levels = Vec::with_capacity(6);
    for nuclear in [NuclearBranch::Up, NuclearBranch::Down] {
        let kappa = p.gamma_e() * effective_field(p, nuclear);
        let s = kappa.hypot(p.e);
        let n = nuclear.index();
        for (level, sigma) in [(ElectronLevel::Upper, 1.0), (ElectronLevel::Lower, -1.0)] {
            let (cp, cm) = block_vector(kappa, p.e, sigma);
            let mut state = vec![Complex64::new(0.0, 0.0); 6];
            state[n] = Complex64::new(cp, 0.0);
            state[4 + n] = Complex64::new(cm, 0.0);
            levels.push(AnalyticLevel {
                energy: p.d + sigma * s,
                level,
                nuclear,
                state,
            });
        }
        let mut state = vec![Complex64::new(0.0, 0.0); 6];
        state[2 + n] = Complex64::new(1.0, 0.0);
        levels.push(AnalyticLevel {
            energy: 0.0,
            level: ElectronLevel::Zero,
            nuclear,
            state,
        });
    }
    Ok(AnalyticSpectrum {
        levels,
        offset: -2.0 * p.d / 3.0,
    })
}
