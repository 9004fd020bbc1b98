//! Fixed-step fourth-order integration of dρ/dt = ℒ(t)ρ.
//!
//! The diagonal of H contributes pure phases e^{−iΔᵢⱼ(t)} to ρᵢⱼ. These are
//! integrated exactly (integrating-factor RK4); every other term of ℒ goes
//! through the classical RK4 stages. Only components of vec(ρ) reachable
//! from the support of ρ₀ are propagated.

use std::collections::VecDeque;

use quantum_core::density::physicality;
use quantum_core::{Complex64, ComplexMatrix, DensityMatrix};

use crate::error::SolverError;
use crate::health;
use crate::liouvillian::{commutator_superoperator, dissipator_superoperator};
use crate::model::{Coefficient, LindbladModel, PulseShape};

pub const COUPLING_STEP_LIMIT: f64 = 0.05;
pub const RELAXATION_STEP_LIMIT: f64 = 0.05;
pub const PHASE_STEP_LIMIT: f64 = 1.0;
pub const ACCURACY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// ∫_{t₀}^{tₖ} tr(O ρ) dt for each requested observable O, per record time.
    pub integrals: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn population(&self, k: usize) -> Vec<f64> {
        self.states.iter().map(|s| s.population(k)).collect()
    }

    pub fn expectation(&self, o: &ComplexMatrix) -> Vec<f64> {
        self.states.iter().map(|s| s.expectation(o).re).collect()
    }

    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory has at least one state")
    }
}

/// The bounds that `evolve` enforces on `dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepLimits {
    /// Bound on the row sums of the off-diagonal Hamiltonian, rad/μs.
    pub coupling: f64,
    /// Total collapse rate, 1/μs.
    pub relaxation: f64,
    /// Bound on the fastest diagonal phase rate, rad/μs.
    pub phase: f64,
}

impl StepLimits {
    pub fn of(model: &LindbladModel) -> Self {
        let offdiag_norm = |m: &ComplexMatrix| {
            (0..m.rows())
                .map(|i| (0..m.cols()).filter(|&j| j != i).map(|j| m[(i, j)].norm()).sum::<f64>())
                .fold(0.0, f64::max)
        };
        let spread = |m: &ComplexMatrix| {
            let d: Vec<f64> = (0..m.rows()).map(|i| m[(i, i)].re).collect();
            d.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - d.iter().cloned().fold(f64::INFINITY, f64::min)
        };
        let mut coupling = offdiag_norm(model.static_hamiltonian());
        let mut phase = spread(model.static_hamiltonian());
        for term in model.terms() {
            coupling += term.coefficient.bound() * offdiag_norm(&term.operator);
            phase += term.coefficient.bound() * spread(&term.operator);
        }
        Self {
            coupling,
            relaxation: model.collapse().iter().map(|c| c.rate()).fold(0.0, |a, r| a + r),
            phase,
        }
    }

    /// Largest admissible step.
    pub fn max_step(&self) -> f64 {
        [
            COUPLING_STEP_LIMIT / self.coupling,
            RELAXATION_STEP_LIMIT / self.relaxation,
            PHASE_STEP_LIMIT / self.phase,
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min)
    }

    fn check(&self, dt: f64) -> Result<(), SolverError> {
        let checks = [
            (COUPLING_STEP_LIMIT / self.coupling, "dt·‖H_offdiag‖ ≤ 0.05"),
            (RELAXATION_STEP_LIMIT / self.relaxation, "dt ≤ 0.05·(shortest relaxation time)"),
            (PHASE_STEP_LIMIT / self.phase, "dt·(phase rate) ≤ 1"),
        ];
        for (limit, constraint) in checks {
            if dt > limit * (1.0 + 1e-12) {
                return Err(SolverError::StepTooLarge { dt, limit, constraint });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    row: usize,
    col: usize,
    value: Complex64,
}

/// ℒ split into exact diagonal phases and a sparse remainder, restricted to
/// the reachable components.
struct Compiled {
    dim: usize,
    comps: Vec<usize>,
    static_phase: Vec<f64>,
    phase_terms: Vec<(usize, Vec<f64>)>,
    static_n: Vec<Entry>,
    term_n: Vec<(usize, Vec<Entry>)>,
    coefficients: Vec<Coefficient>,
    phase_kind: Vec<PhaseKind>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum PhaseKind {
    Zero,
    /// Phase factor is the conjugate of an earlier component's (ρⱼᵢ vs ρᵢⱼ).
    MirrorOf(usize),
    Compute,
}

fn dense_to_entries(m: &ComplexMatrix, index: &[Option<usize>]) -> Vec<Entry> {
    let mut out = Vec::new();
    for (r, ri) in index.iter().enumerate() {
        let Some(row) = *ri else { continue };
        for (c, ci) in index.iter().enumerate() {
            let Some(col) = *ci else { continue };
            let value = m[(r, c)];
            if value != Complex64::new(0.0, 0.0) {
                out.push(Entry { row, col, value });
            }
        }
    }
    out
}

fn phase_weights(h: &ComplexMatrix, comps: &[usize], dim: usize) -> Vec<f64> {
    comps.iter().map(|&c| h[(c / dim, c / dim)].re - h[(c % dim, c % dim)].re).collect()
}

impl Compiled {
    fn new(model: &LindbladModel, support: &[usize]) -> Self {
        let dim = model.dim();
        let n2 = dim * dim;
        let mut static_l = commutator_superoperator(model.static_hamiltonian(), false);
        for c in model.collapse() {
            static_l = &static_l + &dissipator_superoperator(c);
        }
        let term_l: Vec<ComplexMatrix> = model.terms().iter().map(|t| commutator_superoperator(&t.operator, false)).collect();

        let mut reachable = vec![false; n2];
        let mut queue: VecDeque<usize> = support.iter().copied().collect();
        for &s in support {
            reachable[s] = true;
        }
        while let Some(col) = queue.pop_front() {
            for row in 0..n2 {
                if !reachable[row] && std::iter::once(&static_l).chain(&term_l).any(|l| l[(row, col)].norm() > 0.0) {
                    reachable[row] = true;
                    queue.push_back(row);
                }
            }
        }
        let comps: Vec<usize> = (0..n2).filter(|&c| reachable[c]).collect();
        let mut index = vec![None; n2];
        for (k, &c) in comps.iter().enumerate() {
            index[c] = Some(k);
        }

        let static_phase = phase_weights(model.static_hamiltonian(), &comps, dim);
        let mut phase_terms = Vec::new();
        let mut term_n = Vec::new();
        for (m, (term, l)) in model.terms().iter().zip(&term_l).enumerate() {
            let w = phase_weights(&term.operator, &comps, dim);
            if w.iter().any(|&x| x != 0.0) {
                phase_terms.push((m, w));
            }
            let entries = dense_to_entries(l, &index);
            if !entries.is_empty() {
                term_n.push((m, entries));
            }
        }
        let phase_kind = comps
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let (i, j) = (c / dim, c % dim);
                let moving = static_phase[k] != 0.0 || phase_terms.iter().any(|(_, w)| w[k] != 0.0);
                match index[j * dim + i] {
                    _ if !moving => PhaseKind::Zero,
                    Some(m) if m < k => PhaseKind::MirrorOf(m),
                    _ => PhaseKind::Compute,
                }
            })
            .collect();
        Self {
            dim,
            phase_kind,
            static_n: dense_to_entries(&static_l, &index),
            comps,
            static_phase,
            phase_terms,
            term_n,
            coefficients: model.terms().iter().map(|t| t.coefficient.clone()).collect(),
        }
    }

    fn len(&self) -> usize {
        self.comps.len()
    }

    fn compress(&self, rho: &ComplexMatrix) -> Vec<Complex64> {
        self.comps.iter().map(|&c| rho.as_slice()[c]).collect()
    }

    fn expand(&self, y: &[Complex64]) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim, self.dim);
        for (&c, &v) in self.comps.iter().zip(y) {
            m.as_mut_slice()[c] = v;
        }
        m
    }

    /// Weights a with tr(Oρ) = Σ a_c y_c.
    fn observable_weights(&self, o: &ComplexMatrix) -> Vec<Complex64> {
        self.comps.iter().map(|&c| o[(c % self.dim, c / self.dim)]).collect()
    }
}

/// Values of a coefficient at t, t + h/2, t + h and its integrals over
/// [t, t + h/2] and [t, t + h]. Rectangular envelopes take their value from
/// the step interior so that a step ending on a pulse edge sees the left
/// limit.
fn stage_data(c: &Coefficient, t: f64, h: f64) -> ([f64; 3], [f64; 2]) {
    let mid = t + 0.5 * h;
    match c {
        Coefficient::Cosine {
            amplitude,
            frequency,
            phase,
        } => {
            let (s0, c0) = (frequency * t + phase).sin_cos();
            let (s1, c1) = (frequency * mid + phase).sin_cos();
            let (s2, c2) = (frequency * (t + h) + phase).sin_cos();
            let k = amplitude / frequency;
            ([amplitude * c0, amplitude * c1, amplitude * c2], [k * (s1 - s0), k * (s2 - s0)])
        }
        Coefficient::Envelope { amplitude, envelope } if envelope.shape == PulseShape::Rectangular => {
            let v = amplitude * envelope.value(mid);
            ([v; 3], [0.5 * h * v, h * v])
        }
        _ => (
            [c.value(t), c.value(mid), c.value(t + h)],
            [c.integral(t, mid), c.integral(t, t + h)],
        ),
    }
}

struct Workspace {
    k: [Vec<Complex64>; 4],
    u: Vec<Complex64>,
    e_half: Vec<Complex64>,
    e_full: Vec<Complex64>,
    f: [Vec<f64>; 3],
    integrals: [Vec<f64>; 2],
    g: Vec<Complex64>,
}

impl Workspace {
    fn new(n: usize, terms: usize, observables: usize) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); n];
        Self {
            k: [z.clone(), z.clone(), z.clone(), z.clone()],
            u: z.clone(),
            e_half: z.clone(),
            e_full: z,
            f: [vec![0.0; terms], vec![0.0; terms], vec![0.0; terms]],
            integrals: [vec![0.0; terms], vec![0.0; terms]],
            g: vec![Complex64::new(0.0, 0.0); observables],
        }
    }
}

fn dot(a: &[Complex64], v: &[Complex64]) -> Complex64 {
    a.iter().zip(v).map(|(x, z)| x * z).fold(Complex64::new(0.0, 0.0), |s, p| s + p)
}

impl Compiled {
    fn apply_n(&self, f: &[f64], input: &[Complex64], out: &mut [Complex64]) {
        out.fill(Complex64::new(0.0, 0.0));
        for e in &self.static_n {
            out[e.row] += e.value * input[e.col];
        }
        for (m, entries) in &self.term_n {
            let s = f[*m];
            if s == 0.0 {
                continue;
            }
            for e in entries {
                out[e.row] += e.value * input[e.col] * s;
            }
        }
    }

    fn phases(&self, tau: f64, integrals: &[f64], out: &mut [Complex64]) {
        for c in 0..out.len() {
            out[c] = match self.phase_kind[c] {
                PhaseKind::Zero => Complex64::new(1.0, 0.0),
                PhaseKind::MirrorOf(m) => out[m].conj(),
                PhaseKind::Compute => {
                    let mut delta = self.static_phase[c] * tau;
                    for (m, w) in &self.phase_terms {
                        delta += w[c] * integrals[*m];
                    }
                    let (s, co) = delta.sin_cos();
                    Complex64::new(co, -s)
                }
            };
        }
    }

    fn step(&self, ws: &mut Workspace, y: &mut [Complex64], t: f64, h: f64, obs: &[Vec<Complex64>], acc: &mut [Complex64]) {
        for (m, c) in self.coefficients.iter().enumerate() {
            let (v, i) = stage_data(c, t, h);
            for s in 0..3 {
                ws.f[s][m] = v[s];
            }
            ws.integrals[0][m] = i[0];
            ws.integrals[1][m] = i[1];
        }
        self.phases(0.5 * h, &ws.integrals[0], &mut ws.e_half);
        self.phases(h, &ws.integrals[1], &mut ws.e_full);
        let n = self.len();
        for (gk, a) in ws.g.iter_mut().zip(obs) {
            *gk = dot(a, y);
        }

        let [k1, k2, k3, k4] = &mut ws.k;
        self.apply_n(&ws.f[0], y, k1);

        for i in 0..n {
            ws.u[i] = ws.e_half[i] * (y[i] + k1[i] * (0.5 * h));
        }
        for (gk, a) in ws.g.iter_mut().zip(obs) {
            *gk += dot(a, &ws.u) * 2.0;
        }
        self.apply_n(&ws.f[1], &ws.u, k2);
        for i in 0..n {
            k2[i] *= ws.e_half[i].conj();
            ws.u[i] = ws.e_half[i] * (y[i] + k2[i] * (0.5 * h));
        }
        for (gk, a) in ws.g.iter_mut().zip(obs) {
            *gk += dot(a, &ws.u) * 2.0;
        }
        self.apply_n(&ws.f[1], &ws.u, k3);
        for i in 0..n {
            k3[i] *= ws.e_half[i].conj();
            ws.u[i] = ws.e_full[i] * (y[i] + k3[i] * h);
        }
        for (gk, a) in ws.g.iter_mut().zip(obs) {
            *gk += dot(a, &ws.u);
        }
        self.apply_n(&ws.f[2], &ws.u, k4);
        for i in 0..n {
            k4[i] *= ws.e_full[i].conj();
            y[i] = ws.e_full[i] * (y[i] + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0));
        }
        for (a, gk) in acc.iter_mut().zip(&ws.g) {
            *a += gk * (h / 6.0);
        }
    }
}

fn check_state(m: &ComplexMatrix, time: f64) -> Result<(), SolverError> {
    let p = physicality(m)?;
    health::record(&p);
    if p.trace_error > ACCURACY_TOLERANCE || p.min_eigenvalue < -ACCURACY_TOLERANCE {
        return Err(SolverError::Accuracy {
            time,
            trace_drift: p.trace_error,
            min_eigenvalue: p.min_eigenvalue,
        });
    }
    Ok(())
}

fn prepare(
    rho0: &DensityMatrix,
    model: &LindbladModel,
    dt: f64,
    observables: &[ComplexMatrix],
) -> Result<(Compiled, Vec<Vec<Complex64>>), SolverError> {
    let dim = model.dim();
    if rho0.dim() != dim {
        return Err(SolverError::InvalidModel(format!("initial state has dim {}, model has {dim}", rho0.dim())));
    }
    if let Some(o) = observables.iter().find(|o| o.shape() != (dim, dim)) {
        return Err(SolverError::InvalidModel(format!("observable has shape {:?}", o.shape())));
    }
    if !(dt > 0.0) {
        return Err(SolverError::InvalidModel(format!("dt must be positive, got {dt}")));
    }
    StepLimits::of(model).check(dt)?;
    let support: Vec<usize> = (0..dim * dim)
        .filter(|&c| rho0.matrix().as_slice()[c] != Complex64::new(0.0, 0.0))
        .collect();
    let compiled = Compiled::new(model, &support);
    let obs = observables.iter().map(|o| compiled.observable_weights(o)).collect();
    Ok((compiled, obs))
}

fn steps_for(span: f64, dt: f64) -> usize {
    ((span / dt) * (1.0 - 1e-9)).ceil().max(1.0) as usize
}

/// Integrates from `times[0]` (where ρ = ρ₀) through every later record time.
pub fn evolve(rho0: &DensityMatrix, model: &LindbladModel, times: &[f64], dt: f64) -> Result<Trajectory, SolverError> {
    evolve_with_observables(rho0, model, times, dt, &[])
}

/// As [`evolve`], additionally accumulating ∫ tr(Oρ) dt for each observable
/// inside the integrator.
pub fn evolve_with_observables(
    rho0: &DensityMatrix,
    model: &LindbladModel,
    times: &[f64],
    dt: f64,
    observables: &[ComplexMatrix],
) -> Result<Trajectory, SolverError> {
    if times.is_empty() || times.windows(2).any(|w| !(w[1] >= w[0])) || times.iter().any(|t| !t.is_finite()) {
        return Err(SolverError::TimesNotMonotone);
    }
    let (compiled, obs) = prepare(rho0, model, dt, observables)?;
    let mut y = compiled.compress(rho0.matrix());
    let mut acc = vec![Complex64::new(0.0, 0.0); observables.len()];
    let mut ws = Workspace::new(compiled.len(), compiled.coefficients.len(), obs.len());
    let breakpoints = model.breakpoints();

    let mut out = Trajectory {
        times: times.to_vec(),
        states: Vec::with_capacity(times.len()),
        integrals: Vec::with_capacity(times.len()),
    };
    check_state(rho0.matrix(), times[0])?;
    out.states.push(rho0.clone());
    out.integrals.push(acc.iter().map(|z| z.re).collect());

    for w in times.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mut nodes = vec![a];
        nodes.extend(breakpoints.iter().copied().filter(|&p| p > a && p < b));
        nodes.push(b);
        for seg in nodes.windows(2) {
            let span = seg[1] - seg[0];
            if span <= 0.0 {
                continue;
            }
            let n = steps_for(span, dt);
            let h = span / n as f64;
            for k in 0..n {
                compiled.step(&mut ws, &mut y, seg[0] + k as f64 * h, h, &obs, &mut acc);
            }
        }
        let m = compiled.expand(&y);
        check_state(&m, b)?;
        out.states.push(DensityMatrix::new_unchecked(m));
        out.integrals.push(acc.iter().map(|z| z.re).collect());
    }
    Ok(out)
}

/// Final state and observable integrals of a periodic evolution.
#[derive(Debug, Clone)]
pub struct PeriodicRun {
    pub state: DensityMatrix,
    /// ∫₀^{t_end} tr(O ρ) dt per observable.
    pub integrals: Vec<f64>,
}

/// Integrates from 0 to `t_end` for a Hamiltonian with period `period`.
///
/// One period is integrated once per reachable component with the same
/// fixed-step scheme as [`evolve`]. Whole periods are then chained through
/// that linear map and the remainder is stepped directly.
pub fn evolve_periodic(
    rho0: &DensityMatrix,
    model: &LindbladModel,
    period: f64,
    t_end: f64,
    dt: f64,
    observables: &[ComplexMatrix],
) -> Result<PeriodicRun, SolverError> {
    if !(period > 0.0 && period.is_finite()) || !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(SolverError::InvalidModel(format!("bad period {period} or end time {t_end}")));
    }
    for term in model.terms() {
        let periodic = match &term.coefficient {
            Coefficient::Cosine { frequency, .. } => {
                let cycles = frequency * period / std::f64::consts::TAU;
                cycles.round() >= 1.0 && (cycles - cycles.round()).abs() <= 1e-9 * cycles
            }
            _ => false,
        };
        if !periodic {
            return Err(SolverError::InvalidModel(format!(
                "term {:?} is not periodic with period {period}",
                term.coefficient
            )));
        }
    }
    let (compiled, obs) = prepare(rho0, model, dt, observables)?;
    let n = compiled.len();
    let mut ws = Workspace::new(n, compiled.coefficients.len(), obs.len());
    let run = |ws: &mut Workspace, y: &mut [Complex64], acc: &mut [Complex64], span: f64| {
        let steps = steps_for(span, dt);
        let h = span / steps as f64;
        for k in 0..steps {
            compiled.step(ws, y, k as f64 * h, h, &obs, acc);
        }
    };

    let whole = (t_end / period + 1e-9).floor();
    let remainder = (t_end - whole * period).max(0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut y = compiled.compress(rho0.matrix());
    let mut acc = vec![zero; obs.len()];
    if whole >= 1.0 {
        // Columns of the one-period map and the per-period integrals.
        let mut map = Vec::with_capacity(n);
        let mut weights = vec![vec![zero; n]; obs.len()];
        for j in 0..n {
            let mut col = vec![zero; n];
            col[j] = Complex64::new(1.0, 0.0);
            let mut a = vec![zero; obs.len()];
            run(&mut ws, &mut col, &mut a, period);
            for (o, v) in a.into_iter().enumerate() {
                weights[o][j] = v;
            }
            map.push(col);
        }
        let mut next = vec![zero; n];
        for _ in 0..whole as usize {
            for (a, w) in acc.iter_mut().zip(&weights) {
                *a += dot(w, &y);
            }
            next.fill(zero);
            for (col, &yj) in map.iter().zip(&y) {
                for (v, c) in next.iter_mut().zip(col) {
                    *v += c * yj;
                }
            }
            std::mem::swap(&mut y, &mut next);
        }
    }
    if remainder > 1e-12 * period {
        run(&mut ws, &mut y, &mut acc, remainder);
    }
    let m = compiled.expand(&y);
    check_state(&m, t_end)?;
    Ok(PeriodicRun {
        state: DensityMatrix::new_unchecked(m),
        integrals: acc.iter().map(|z| z.re).collect(),
    })
}
