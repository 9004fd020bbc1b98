use std::f64::consts::TAU;

use lindblad_solver::bloch::{EXCITED, GROUND};
use lindblad_solver::*;
use optical_driving::AcDrive;
use quantum_core::operators::sigma_x;
use quantum_core::{Complex64, ComplexMatrix, DensityMatrix};

fn grid(t_end: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|k| t_end * k as f64 / n as f64).collect()
}

fn closed_rabi(omega: f64, delta: f64) -> LindbladModel {
    let dissipative = three_level_bloch_model(omega, delta, &BlochParams::lifetime_limited(1.0), None).unwrap();
    LindbladModel::new(dissipative.static_hamiltonian().clone()).unwrap()
}

#[test]
fn generalized_rabi_formula() {
    let (omega, delta): (f64, f64) = (2.0, 1.3);
    let w = (omega * omega + delta * delta).sqrt();
    let model = closed_rabi(omega, delta);
    let period = TAU / w;
    let times = grid(4.0 * period, 80);
    let rho0 = DensityMatrix::basis_state(3, GROUND);
    let coarse = evolve(&rho0, &model, &times, period / 200.0).unwrap();
    let fine = evolve(&rho0, &model, &times, period / 2000.0).unwrap();
    for ((t, a), b) in times.iter().zip(coarse.population(EXCITED)).zip(fine.population(EXCITED)) {
        let exact = omega * omega / (w * w) * (w * t / 2.0).sin().powi(2);
        assert!((a - exact).abs() < 1e-6, "t = {t}: {a} vs {exact}");
        assert!((a - b).abs() < 1e-6);
    }
}

fn rabi_error(dt: f64) -> f64 {
    let omega = 1.0;
    let model = LindbladModel::new(sigma_x().scale_real(omega / 2.0)).unwrap();
    let t_end = TAU;
    let traj = evolve(&DensityMatrix::basis_state(2, 0), &model, &[0.0, 0.3 * t_end, t_end], dt).unwrap();
    traj.times
        .iter()
        .zip(traj.population(1))
        .map(|(t, p)| (p - (omega * t / 2.0).sin().powi(2)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn fourth_order_convergence() {
    let dt = 0.1;
    let e: Vec<f64> = (0..3).map(|k| rabi_error(dt / 2f64.powi(k))).collect();
    for w in e.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 3.8, "order {order} from errors {e:?}");
    }
}

/// Two-level Bloch equations in (ρₑₑ, Re ρ_ge, Im ρ_ge), fine-step RK4.
fn bloch_vector_oracle(omega: f64, delta: f64, t1: f64, t2: f64, times: &[f64], steps_per_unit: f64) -> Vec<f64> {
    let f = |s: [f64; 3]| -> [f64; 3] {
        let [pe, x, y] = s;
        [
            omega * y - pe / t1,
            -delta * y - x / t2,
            -(omega / 2.0) * (2.0 * pe - 1.0) + delta * x - y / t2,
        ]
    };
    let add = |a: [f64; 3], b: [f64; 3], h: f64| [a[0] + h * b[0], a[1] + h * b[1], a[2] + h * b[2]];
    let mut s = [0.0; 3];
    let mut t = times[0];
    let mut out = vec![0.0];
    for &target in &times[1..] {
        let n = ((target - t) * steps_per_unit).ceil() as usize;
        let h = (target - t) / n as f64;
        for _ in 0..n {
            let k1 = f(s);
            let k2 = f(add(s, k1, h / 2.0));
            let k3 = f(add(s, k2, h / 2.0));
            let k4 = f(add(s, k3, h));
            for i in 0..3 {
                s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        t = target;
        out.push(s[0]);
    }
    out
}

#[test]
fn matches_independent_bloch_vector_integration() {
    let (omega, delta) = (5.0, 1.7);
    let p = BlochParams::new(1.0, 2.5, 0.0);
    let model = three_level_bloch_model(omega, delta, &p, None).unwrap();
    let times = grid(6.0, 60);
    let traj = evolve(&DensityMatrix::basis_state(3, GROUND), &model, &times, 0.002).unwrap();
    let oracle = bloch_vector_oracle(omega, delta, p.t1, p.t2(), &times, 4000.0);
    for (a, b) in traj.population(EXCITED).iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
}

#[test]
fn steady_state_matches_long_time_evolution() {
    let p = BlochParams::new(1.0, 1.5, 0.0);
    let model = three_level_bloch_model(2.2, -0.8, &p, None).unwrap();
    let ss = steady_state(&model).unwrap();
    let traj = evolve(&DensityMatrix::basis_state(3, GROUND), &model, &[0.0, 60.0], 0.001).unwrap();
    let diff = (ss.state.matrix() - traj.final_state().matrix()).max_abs();
    assert!(diff < 1e-8, "{diff}");
}

#[test]
fn lifetime_limited_coherence_decay() {
    let t1 = 0.8;
    let model = three_level_bloch_model(0.0, 0.0, &BlochParams::lifetime_limited(t1), None).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let psi = [Complex64::new(h, 0.0), Complex64::new(h, 0.0), Complex64::new(0.0, 0.0)];
    let rho0 = DensityMatrix::pure(&psi).unwrap();
    let times = grid(4.0, 20);
    let traj = evolve(&rho0, &model, &times, 0.004).unwrap();
    for (t, s) in times.iter().zip(&traj.states) {
        let want = 0.5 * (-t / (2.0 * t1)).exp();
        assert!((s.coherence(GROUND, EXCITED).norm() - want).abs() < 1e-6);
    }
    let rate = -(traj.states[20].coherence(GROUND, EXCITED).norm() / 0.5).ln() / 4.0;
    assert!((rate - 1.0 / (2.0 * t1)).abs() < 1e-6);
}

#[test]
fn strongly_driven_phase_is_integrated_accurately() {
    let (omega, w) = (1.0, 20.0);
    let p = BlochParams::lifetime_limited(1.0);
    let drive = AcDrive::monochromatic(5.0 * w, w);
    let model = with_stark_drive(three_level_bloch_model(omega, 2.0 * w, &p, None).unwrap(), &drive).unwrap();
    let rho0 = DensityMatrix::basis_state(3, GROUND);
    let nu = 2.0 * w + 5.0 * w + omega;
    let run = |c: f64| evolve(&rho0, &model, &[0.0, 1.0, 3.0], c / nu).unwrap().population(EXCITED);
    let reference = run(0.05);
    let coarse = run(0.5);
    for (a, b) in coarse.iter().zip(&reference) {
        assert!((a - b).abs() < 1e-4 * reference[2].max(1e-3), "{a} vs {b}");
    }
}

#[test]
fn rescaling_time_is_exact() {
    let p = BlochParams::new(1.0, 3.0, 0.2);
    let drive = AcDrive::monochromatic(4.0, 2.0);
    let base = with_stark_drive(three_level_bloch_model(1.5, 0.7, &p, None).unwrap(), &drive).unwrap();
    let lambda = 10.0;
    let scaled_drive = AcDrive::monochromatic(4.0 * lambda, 2.0 * lambda);
    let scaled = with_stark_drive(
        three_level_bloch_model(1.5 * lambda, 0.7 * lambda, &p.rescaled(lambda), None).unwrap(),
        &scaled_drive,
    )
    .unwrap();
    let rho0 = DensityMatrix::basis_state(3, GROUND);
    let a = evolve(&rho0, &base, &[0.0, 2.0, 5.0], 0.01).unwrap();
    let b = evolve(&rho0, &scaled, &[0.0, 0.2, 0.5], 0.001).unwrap();
    for (x, y) in a.states.iter().zip(&b.states) {
        assert!((x.matrix() - y.matrix()).max_abs() < 1e-12);
    }
}

#[test]
fn health_tracker_records_checked_states() {
    let model = LindbladModel::new(ComplexMatrix::zeros(2, 2)).unwrap();
    let before = health::snapshot().checked_states;
    evolve(&DensityMatrix::basis_state(2, 0), &model, &grid(1.0, 4), 0.1).unwrap();
    let report = health::snapshot();
    assert!(report.checked_states >= before + 5);
    assert!(report.max_trace_drift < 1e-12);
}

#[test]
fn periodic_chaining_matches_direct_integration() {
    let w = 30.0;
    let p = BlochParams::new(1.0, 4.0, 0.3);
    let drive = AcDrive::bichromatic(2.0 * w, w, 4.0 * w, 2.0 * w, 0.7);
    let model = with_stark_drive(three_level_bloch_model(4.0, 1.5 * w, &p, None).unwrap(), &drive).unwrap();
    let rho0 = DensityMatrix::basis_state(3, GROUND);
    let obs = [quantum_core::operators::projector(3, EXCITED)];
    let period = TAU / w;
    let t_end = 2.3;
    let dt = period / 400.0;
    let fast = evolve_periodic(&rho0, &model, period, t_end, dt, &obs).unwrap();
    let whole = (t_end / period).floor() * period;
    let direct_whole = evolve_with_observables(&rho0, &model, &[0.0, whole], dt, &obs).unwrap();
    let rest = evolve_with_observables(direct_whole.final_state(), &model, &[0.0, t_end - whole], dt, &obs).unwrap();
    assert!((fast.state.matrix() - rest.final_state().matrix()).max_abs() < 1e-10);
    let total = direct_whole.integrals[1][0] + rest.integrals[1][0];
    assert!((fast.integrals[0] - total).abs() < 1e-10, "{} vs {total}", fast.integrals[0]);
    assert!(evolve_periodic(&rho0, &model, 1.3 * period, t_end, dt, &obs).is_err());
}
