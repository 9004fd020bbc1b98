//! Three-level optical Bloch model over (|g⟩, |e⟩, |s⟩).

use optical_driving::AcDrive;
use quantum_core::operators::{projector, transition};
use quantum_core::ComplexMatrix;

use crate::error::SolverError;
use crate::model::{CollapseLabel, CollapseOperator, Coefficient, LindbladModel, PulseEnvelope};
use crate::solver::Trajectory;

pub const GROUND: usize = 0;
pub const EXCITED: usize = 1;
pub const SHELF: usize = 2;

/// Normalization of the pure-dephasing channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DephasingConvention {
    /// C₂ = √(1/(2T₂*))(Pₑ − P_g): coherences dephase at exactly 1/T₂*.
    #[default]
    RateOneOverT2Star,
    /// C₂ = √(1/T₂*)(Pₑ − P_g): coherences dephase at 2/T₂*.
    Unscaled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochParams {
    /// Radiative lifetime, μs.
    pub t1: f64,
    /// Pure dephasing time, μs; `f64::INFINITY` disables the channel.
    pub t2_star: f64,
    /// Shelving rate |e⟩ → |s⟩, 1/μs.
    pub gamma: f64,
    /// Repump rate |s⟩ → |g⟩, 1/μs.
    pub repump: f64,
    pub dephasing: DephasingConvention,
}

impl BlochParams {
    pub fn new(t1: f64, t2_star: f64, gamma: f64) -> Self {
        Self {
            t1,
            t2_star,
            gamma,
            repump: 0.0,
            dephasing: DephasingConvention::default(),
        }
    }

    /// Lifetime-limited optics: T₂ = 2T₁, no shelving.
    pub fn lifetime_limited(t1: f64) -> Self {
        Self::new(t1, f64::INFINITY, 0.0)
    }

    /// From a total coherence time T₂ ≤ 2T₁.
    pub fn from_t2(t1: f64, t2: f64, gamma: f64) -> Result<Self, SolverError> {
        let inv = 1.0 / t2 - 0.5 / t1;
        if inv < -1e-12 / t2 {
            return Err(SolverError::InvalidModel(format!("T2 = {t2} exceeds 2T1 = {}", 2.0 * t1)));
        }
        let t2_star = if inv <= 0.0 { f64::INFINITY } else { 1.0 / inv };
        Ok(Self::new(t1, t2_star, gamma))
    }

    pub fn with_repump(mut self, repump: f64) -> Self {
        self.repump = repump;
        self
    }

    pub fn with_dephasing(mut self, dephasing: DephasingConvention) -> Self {
        self.dephasing = dephasing;
        self
    }

    /// T₂ = ((2T₁)⁻¹ + T₂*⁻¹)⁻¹ under the default convention.
    pub fn t2(&self) -> f64 {
        1.0 / (0.5 / self.t1 + self.coherence_dephasing_rate())
    }

    /// Contribution of C₂ to the decay rate of ρ_ge.
    pub fn coherence_dephasing_rate(&self) -> f64 {
        let base = 1.0 / self.t2_star;
        match self.dephasing {
            DephasingConvention::RateOneOverT2Star => base,
            DephasingConvention::Unscaled => 2.0 * base,
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |what: &str, v: f64| Err(SolverError::InvalidModel(format!("{what} = {v} is out of range")));
        if !(self.t1 > 0.0 && self.t1.is_finite()) {
            return bad("T1", self.t1);
        }
        if !(self.t2_star > 0.0) {
            return bad("T2*", self.t2_star);
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return bad("Gamma", self.gamma);
        }
        if !(self.repump >= 0.0 && self.repump.is_finite()) {
            return bad("repump", self.repump);
        }
        Ok(())
    }

    /// Multiplies every rate by λ (times divided by λ).
    pub fn rescaled(&self, lambda: f64) -> Self {
        Self {
            t1: self.t1 / lambda,
            t2_star: self.t2_star / lambda,
            gamma: self.gamma * lambda,
            repump: self.repump * lambda,
            dephasing: self.dephasing,
        }
    }

    pub fn collapse_operators(&self) -> Vec<CollapseOperator> {
        let mut out = vec![CollapseOperator::new(
            transition(3, GROUND, EXCITED).scale_real(self.t1.recip().sqrt()),
            CollapseLabel::RadiativeDecay,
        )];
        if self.t2_star.is_finite() {
            let rate = match self.dephasing {
                DephasingConvention::RateOneOverT2Star => 0.5 / self.t2_star,
                DephasingConvention::Unscaled => 1.0 / self.t2_star,
            };
            out.push(CollapseOperator::new(level_difference().scale_real(rate.sqrt()), CollapseLabel::PureDephasing));
        }
        if self.gamma > 0.0 {
            out.push(CollapseOperator::new(
                transition(3, SHELF, EXCITED).scale_real(self.gamma.sqrt()),
                CollapseLabel::SpinRelaxation,
            ));
        }
        if self.repump > 0.0 {
            out.push(CollapseOperator::new(
                transition(3, GROUND, SHELF).scale_real(self.repump.sqrt()),
                CollapseLabel::Custom,
            ));
        }
        out
    }
}

/// Pₑ − P_g.
fn level_difference() -> ComplexMatrix {
    &projector(3, EXCITED) - &projector(3, GROUND)
}

/// H = (Ω(t)/2)(|g⟩⟨e| + |e⟩⟨g|) + δ|e⟩⟨e|, with Ω(t) = Ω·envelope(t) when an
/// envelope is given.
pub fn three_level_bloch_model(
    omega: f64,
    delta: f64,
    params: &BlochParams,
    envelope: Option<PulseEnvelope>,
) -> Result<LindbladModel, SolverError> {
    params.validate()?;
    if !(omega >= 0.0 && omega.is_finite()) || !delta.is_finite() {
        return Err(SolverError::InvalidModel(format!("bad drive Ω = {omega}, δ = {delta}")));
    }
    let coupling = &transition(3, GROUND, EXCITED) + &transition(3, EXCITED, GROUND);
    let detuning = projector(3, EXCITED).scale_real(delta);
    let mut model = match envelope {
        None => LindbladModel::new(&detuning + &coupling.scale_real(omega / 2.0))?,
        Some(envelope) => LindbladModel::new(detuning)?.with_term(
            coupling.scale_real(0.5),
            Coefficient::Envelope {
                amplitude: omega,
                envelope,
            },
        )?,
    };
    for c in params.collapse_operators() {
        model = model.with_collapse(c)?;
    }
    Ok(model)
}

/// Adds the longitudinal Stark drive Σ (𝒜ᵢcos(ωᵢt + φᵢ)/2)(Pₑ − P_g).
pub fn with_stark_drive(model: LindbladModel, drive: &AcDrive) -> Result<LindbladModel, SolverError> {
    drive.validate().map_err(|e| SolverError::InvalidModel(e.to_string()))?;
    let op = level_difference().scale_real(0.5);
    drive.tones.iter().try_fold(model, |m, tone| {
        m.with_term(
            op.clone(),
            Coefficient::Cosine {
                amplitude: tone.amplitude,
                frequency: tone.frequency,
                phase: tone.phase,
            },
        )
    })
}

/// ∫ ρₑₑ/T₁ dt over `window` by the trapezoid rule on the recorded grid,
/// interpolating linearly at window edges.
pub fn emission_signal(traj: &Trajectory, t1: f64, window: (f64, f64)) -> Result<f64, SolverError> {
    let (a, b) = window;
    let times = &traj.times;
    let (first, last) = (times[0], *times.last().expect("non-empty"));
    if !(a >= first && b <= last && b >= a) {
        return Err(SolverError::InvalidModel(format!(
            "window ({a}, {b}) outside trajectory ({first}, {last})"
        )));
    }
    let pe: Vec<f64> = traj.states.iter().map(|s| s.population(EXCITED)).collect();
    let at = |t: f64| -> f64 {
        let k = times.partition_point(|&x| x < t).min(times.len() - 1);
        if k == 0 || times[k] == t {
            return pe[k];
        }
        let f = (t - times[k - 1]) / (times[k] - times[k - 1]);
        pe[k - 1] + f * (pe[k] - pe[k - 1])
    };
    let mut nodes = vec![(a, at(a))];
    nodes.extend(times.iter().zip(&pe).filter(|(t, _)| **t > a && **t < b).map(|(t, p)| (*t, *p)));
    nodes.push((b, at(b)));
    let area: f64 = nodes.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum();
    Ok(area / t1)
}
