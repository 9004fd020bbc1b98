use std::fmt;
use std::sync::Arc;

use quantum_core::{ComplexMatrix, HermitianOperator};

use crate::error::SolverError;

/// Pulse shape with values in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseShape {
    Rectangular,
    /// Error-function edges; `rise` is the erf length scale in μs.
    Smoothed { rise: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseEnvelope {
    pub shape: PulseShape,
    pub t_on: f64,
    pub t_off: f64,
}

impl PulseEnvelope {
    pub fn new(shape: PulseShape, t_on: f64, t_off: f64) -> Result<Self, SolverError> {
        if !(t_off > t_on) {
            return Err(SolverError::InvalidModel(format!("pulse needs t_off > t_on ({t_on} .. {t_off})")));
        }
        if let PulseShape::Smoothed { rise } = shape {
            if !(rise > 0.0) {
                return Err(SolverError::InvalidModel("smoothed pulse needs a positive rise time".into()));
            }
        }
        Ok(Self { shape, t_on, t_off })
    }

    pub fn rectangular(t_on: f64, t_off: f64) -> Result<Self, SolverError> {
        Self::new(PulseShape::Rectangular, t_on, t_off)
    }

    pub fn value(&self, t: f64) -> f64 {
        match self.shape {
            PulseShape::Rectangular => {
                if t >= self.t_on && t < self.t_off {
                    1.0
                } else {
                    0.0
                }
            }
            PulseShape::Smoothed { rise } => {
                0.5 * (libm::erf((t - self.t_on) / rise) - libm::erf((t - self.t_off) / rise))
            }
        }
    }

    /// Discontinuities the integrator must step onto.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.shape {
            PulseShape::Rectangular => vec![self.t_on, self.t_off],
            PulseShape::Smoothed { .. } => Vec::new(),
        }
    }

    pub fn scaled_time(&self, factor: f64) -> Self {
        let shape = match self.shape {
            PulseShape::Rectangular => PulseShape::Rectangular,
            PulseShape::Smoothed { rise } => PulseShape::Smoothed { rise: rise * factor },
        };
        Self {
            shape,
            t_on: self.t_on * factor,
            t_off: self.t_off * factor,
        }
    }
}

/// Scalar time dependence f(t) multiplying a Hamiltonian term.
#[derive(Clone)]
pub enum Coefficient {
    /// A cos(ωt + φ).
    Cosine { amplitude: f64, frequency: f64, phase: f64 },
    Envelope { amplitude: f64, envelope: PulseEnvelope },
    /// Arbitrary f(t) with |f| ≤ bound.
    Custom {
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        bound: f64,
    },
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Cosine {
                amplitude,
                frequency,
                phase,
            } => write!(f, "Cosine({amplitude}, {frequency}, {phase})"),
            Coefficient::Envelope { amplitude, envelope } => write!(f, "Envelope({amplitude}, {envelope:?})"),
            Coefficient::Custom { bound, .. } => write!(f, "Custom(|f| <= {bound})"),
        }
    }
}

const GL_NODES: [f64; 4] = [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
const GL_WEIGHTS: [f64; 4] = [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];

/// 8-point Gauss–Legendre on [a, b].
fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    h * GL_NODES
        .iter()
        .zip(GL_WEIGHTS)
        .map(|(&x, w)| w * (f(c - h * x) + f(c + h * x)))
        .sum::<f64>()
}

impl Coefficient {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            Coefficient::Cosine {
                amplitude,
                frequency,
                phase,
            } => amplitude * (frequency * t + phase).cos(),
            Coefficient::Envelope { amplitude, envelope } => amplitude * envelope.value(t),
            Coefficient::Custom { f, .. } => f(t),
        }
    }

    /// ∫ₐᵇ f dt.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        match self {
            Coefficient::Cosine {
                amplitude,
                frequency,
                phase,
            } => amplitude / frequency * ((frequency * b + phase).sin() - (frequency * a + phase).sin()),
            Coefficient::Envelope { amplitude, envelope } => match envelope.shape {
                PulseShape::Rectangular => {
                    let lo = a.max(envelope.t_on);
                    let hi = b.min(envelope.t_off);
                    amplitude * (hi - lo).max(0.0)
                }
                PulseShape::Smoothed { .. } => gauss_legendre(|t| self.value(t), a, b),
            },
            Coefficient::Custom { f, .. } => gauss_legendre(|t| f(t), a, b),
        }
    }

    pub fn bound(&self) -> f64 {
        match self {
            Coefficient::Cosine { amplitude, .. } => amplitude.abs(),
            Coefficient::Envelope { amplitude, .. } => amplitude.abs(),
            Coefficient::Custom { bound, .. } => bound.abs(),
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Coefficient::Envelope { envelope, .. } => envelope.breakpoints(),
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollapseLabel {
    RadiativeDecay,
    PureDephasing,
    SpinRelaxation,
    Custom,
}

/// Jump operator with its rate folded in (units √(1/μs)).
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseOperator {
    pub matrix: ComplexMatrix,
    pub label: CollapseLabel,
}

impl CollapseOperator {
    pub fn new(matrix: ComplexMatrix, label: CollapseLabel) -> Self {
        Self { matrix, label }
    }

    /// ‖C†C‖∞, an upper bound on the channel rate.
    pub fn rate(&self) -> f64 {
        (&self.matrix.adjoint() * &self.matrix).norm_inf()
    }
}

#[derive(Debug, Clone)]
pub struct HamiltonianTerm {
    pub operator: ComplexMatrix,
    pub coefficient: Coefficient,
}

/// H(t) = H₀ + Σₘ fₘ(t) Hₘ with a list of collapse operators.
#[derive(Debug, Clone)]
pub struct LindbladModel {
    dim: usize,
    static_h: ComplexMatrix,
    terms: Vec<HamiltonianTerm>,
    collapse: Vec<CollapseOperator>,
}

fn check_hermitian(m: &ComplexMatrix, dim: usize, what: &str) -> Result<(), SolverError> {
    if m.shape() != (dim, dim) {
        return Err(SolverError::InvalidModel(format!("{what} has shape {:?}, expected {dim}x{dim}", m.shape())));
    }
    HermitianOperator::angular(m.clone())?;
    Ok(())
}

impl LindbladModel {
    pub fn new(static_h: ComplexMatrix) -> Result<Self, SolverError> {
        let dim = static_h.rows();
        check_hermitian(&static_h, dim, "static Hamiltonian")?;
        Ok(Self {
            dim,
            static_h,
            terms: Vec::new(),
            collapse: Vec::new(),
        })
    }

    pub fn with_term(mut self, operator: ComplexMatrix, coefficient: Coefficient) -> Result<Self, SolverError> {
        check_hermitian(&operator, self.dim, "Hamiltonian term")?;
        self.terms.push(HamiltonianTerm { operator, coefficient });
        Ok(self)
    }

    pub fn with_collapse(mut self, c: CollapseOperator) -> Result<Self, SolverError> {
        if c.matrix.shape() != (self.dim, self.dim) {
            return Err(SolverError::InvalidModel(format!(
                "collapse operator has shape {:?}, expected {}x{}",
                c.matrix.shape(),
                self.dim,
                self.dim
            )));
        }
        self.collapse.push(c);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn static_hamiltonian(&self) -> &ComplexMatrix {
        &self.static_h
    }

    pub fn terms(&self) -> &[HamiltonianTerm] {
        &self.terms
    }

    pub fn collapse(&self) -> &[CollapseOperator] {
        &self.collapse
    }

    pub fn is_time_independent(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn hamiltonian(&self, t: f64) -> HermitianOperator {
        let mut h = self.static_h.clone();
        for term in &self.terms {
            h = &h + &term.operator.scale_real(term.coefficient.value(t));
        }
        HermitianOperator::angular(h).expect("sum of Hermitian terms")
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.terms.iter().flat_map(|t| t.coefficient.breakpoints()).collect();
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    /// Shortest relaxation time 1/Σ rates, or ∞ without dissipation.
    pub fn min_relaxation_time(&self) -> f64 {
        let total = self.collapse.iter().map(|c| c.rate()).fold(0.0, |a, r| a + r);
        1.0 / total
    }

    /// Longest single-channel relaxation time.
    pub fn max_relaxation_time(&self) -> f64 {
        self.collapse
            .iter()
            .map(|c| c.rate())
            .filter(|&r| r > 0.0)
            .map(|r| 1.0 / r)
            .fold(0.0, f64::max)
    }
}
