use proptest::prelude::*;
use quantum_core::eigendecompose_hermitian;
use spin_hamiltonian::*;

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn analytic_matches_numeric(d in 500.0f64..2000.0, e in -60.0f64..60.0,
                                bz in -5.0f64..5.0, a in -5.0f64..5.0) {
        let p = SpinSystemParams::new(d, e).with_bz(bz).with_nucleus(HyperfineTensor::zz(a));
        let numeric = eigendecompose_hermitian(&build_ground_hamiltonian(&p).unwrap()).unwrap().values;
        let analytic = sorted(analytic_spectrum(&p).unwrap().absolute_energies());
        for (x, y) in numeric.iter().zip(&analytic) {
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn bisection_matches_closed_form(a in -10.0f64..10.0, e in 1.0f64..40.0, g in 1.9f64..2.1) {
        let mut p = SpinSystemParams::new(1333.9535, e).with_nucleus(HyperfineTensor::zz(a));
        p.g = g;
        let up = find_zefoz_field(&p, NuclearBranch::Up).unwrap();
        prop_assert!((up + a / (g * MU_B_MHZ_PER_MT)).abs() < 1e-6);
        let down = find_zefoz_field(&p, NuclearBranch::Down).unwrap();
        prop_assert!((down - a / (g * MU_B_MHZ_PER_MT)).abs() < 1e-6);
    }
}

#[test]
fn dispersion_is_even_about_zefoz() {
    let p = SpinSystemParams::new(1333.9535, 18.4195).with_nucleus(HyperfineTensor::zz(1.3));
    let b0 = zero_effective_field(&p, NuclearBranch::Down);
    let grid: Vec<f64> = (-40..=40).map(|k| b0 + 0.1 * k as f64).collect();
    let d = transition_dispersion(&p, &grid, NuclearBranch::Down).unwrap();
    let n = grid.len();
    for k in 0..n {
        assert!((d.zero_plus[k] - d.zero_plus[n - 1 - k]).abs() < 1e-8);
        assert!((d.plus_minus[k] - d.plus_minus[n - 1 - k]).abs() < 1e-8);
    }
}

#[test]
fn labels_survive_a_level_crossing() {
    // Once gμ_B|B| exceeds D the |−⟩-like branch crosses |0⟩.
    let p = SpinSystemParams::new(100.0, 5.0).with_nucleus(HyperfineTensor::zz(0.0));
    let grid: Vec<f64> = (0..=100).map(|k| k as f64 * 0.1).collect();
    let d = transition_dispersion(&p, &grid, NuclearBranch::Up).unwrap();
    let gamma = p.gamma_e();
    for (k, &b) in grid.iter().enumerate() {
        let s = (gamma * b).hypot(p.e);
        assert!((d.zero_plus[k] - (p.d + s)).abs() < 1e-9);
        assert!((d.plus_minus[k] - 2.0 * s).abs() < 1e-9);
    }
}
