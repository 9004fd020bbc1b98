use experiments::*;
use lindblad_solver::BlochParams;
use rand_distr::{Distribution, Normal};
use spin_dynamics::rng::stream_rng;

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

fn bloch() -> BlochParams {
    BlochParams::from_t2(1.0, 26.0 / 14.0, 0.0).unwrap()
}

#[test]
fn weak_drive_linewidth_is_two_over_t2() {
    let p = bloch();
    let s = EmissionSettings::continuous(0.05, p);
    let r = ple_scan(&linspace(-10.0, 10.0, 401), &s, None).unwrap();
    let f = fit_lorentzian(&r).unwrap();
    let want = 2.0 / p.t2();
    assert!((f.fwhm / want - 1.0).abs() < 0.01, "{} vs {want}", f.fwhm);
    assert!(f.center.abs() < 1e-9);
}

#[test]
fn power_broadening_follows_saturation_law() {
    let p = bloch();
    for omega in [1.0, 3.0, 10.0] {
        let want = 2.0 * (1.0 / p.t2().powi(2) + omega * omega * p.t1 / p.t2()).sqrt();
        let r = ple_scan(&linspace(-8.0 * want, 8.0 * want, 401), &EmissionSettings::continuous(omega, p), None).unwrap();
        let f = fit_lorentzian(&r).unwrap();
        assert!((f.fwhm / want - 1.0).abs() < 0.02, "Ω = {omega}: {} vs {want}", f.fwhm);
    }
}

#[test]
fn noisy_21_mhz_line() {
    let x = linspace(-150.0, 150.0, 301);
    let noise = Normal::new(0.0, 0.01).unwrap();
    for seed in 0..10 {
        let mut rng = stream_rng(seed, 0, 0);
        let y: Vec<f64> = x.iter().map(|v| lorentzian(*v, 3.0, 21.0, 1.0, 0.05) + noise.sample(&mut rng)).collect();
        let f = fit_lorentzian_xy(&x, &y, "MHz").unwrap();
        assert!((f.fwhm_mhz / 21.0 - 1.0).abs() < 0.02, "seed {seed}: {f:?}");
        assert!(!f.flagged);
    }
}

#[test]
fn merged_lines_are_flagged() {
    let x = linspace(-150.0, 150.0, 301);
    let noise = Normal::new(0.0, 0.01).unwrap();
    let mut rng = stream_rng(7, 0, 0);
    let y: Vec<f64> = x
        .iter()
        .map(|v| lorentzian(*v, -12.0, 21.0, 1.0, 0.0) + lorentzian(*v, 12.0, 21.0, 0.8, 0.0) + noise.sample(&mut rng))
        .collect();
    assert!(fit_lorentzian_xy(&x, &y, "MHz").unwrap().flagged);
}

#[test]
fn shelving_only_removes_signal() {
    let deltas = linspace(-6.0, 6.0, 61);
    let total = |gamma: f64| {
        let p = BlochParams::new(1.0, bloch().t2_star, gamma);
        ple_scan(&deltas, &EmissionSettings::pulsed(2.0, p, 3.0), None).unwrap().values.iter().sum::<f64>()
    };
    let totals: Vec<f64> = [0.0, 0.05, 0.2, 1.0, 5.0].iter().map(|&g| total(g)).collect();
    assert!(totals.windows(2).all(|w| w[1] <= w[0]), "{totals:?}");
}

#[test]
fn continuous_wave_with_trap_is_refused() {
    let p = BlochParams::new(1.0, 2.0, 0.1);
    let err = ple_scan(&[0.0], &EmissionSettings::continuous(1.0, p), None).unwrap_err();
    assert!(matches!(err, ExperimentError::TrappedSteadyState));
    assert!(err.to_string().contains("pulsed"));
}

#[test]
fn fine_structure_line_positions() {
    let fs = FineStructureParams::from_ground_transitions(1352.373, 36.839, 970.0, -483.0);
    let lines = predict_ple_lines(&fs).unwrap();
    let want = [0.0, (970.0 - 483.0) - 1352.373, (970.0 + 483.0) - (fs.d_gs - fs.e_gs)];
    for (a, b) in lines.iter().zip(want) {
        assert!((a - b).abs() < 1e-9, "{lines:?}");
    }
    assert!((lines[1] + 865.373).abs() < 1e-3 && (lines[2] - 137.466).abs() < 1e-3);
    assert!(lines[1] < 0.0 && lines[2] > 0.0);
}

#[test]
fn normalized_spectra_are_scale_invariant() {
    let p = bloch();
    let base: Vec<f64> = linspace(-5.0, 5.0, 41);
    let spectrum = |lambda: f64| {
        let s = EmissionSettings::pulsed(1.5, p, 3.0).rescaled(lambda);
        let deltas: Vec<f64> = base.iter().map(|d| d * lambda).collect();
        let r = ple_scan(&deltas, &s, None).unwrap();
        let max = r.values.iter().cloned().fold(0.0, f64::max);
        r.values.iter().map(|v| v / max).collect::<Vec<f64>>()
    };
    let reference = spectrum(1.0);
    for lambda in [0.1, 10.0] {
        for (a, b) in spectrum(lambda).iter().zip(&reference) {
            assert!((a - b).abs() < 1e-6);
        }
    }
}
