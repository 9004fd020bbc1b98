//! Fast invariant checks behind `stueckelberg selftest`.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::path::Path;

use experiments::{fit_lorentzian, lzs_map, ple_scan, predict_ple_lines, EmissionSettings, FineStructureParams, ScanResult};
use lindblad_solver::{evolve, health, BlochParams, LindbladModel};
use optical_driving::generalized_bessel_2d;
use quantum_core::operators::sigma_x;
use quantum_core::{eigendecompose_hermitian, Complex64, DensityMatrix};
use spin_hamiltonian::{
    analytic_spectrum, build_ground_hamiltonian, find_zefoz_field, HyperfineTensor, NuclearBranch, SpinSystemParams, MU_B_MHZ_PER_MT,
};

use crate::config::Config;
use crate::output::{parse_csv, parse_json, render_csv, render_json, render_meta};
use crate::schema::Experiment;

type Check = Result<String, String>;
type NamedCheck = (&'static str, fn() -> Check);

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

fn desk_bloch() -> BlochParams {
    BlochParams::from_t2(1.0, 26.0 / 14.0, 0.0).expect("T2 < 2T1")
}

fn rabi_oracle() -> Check {
    let omega = 1.0;
    let model = LindbladModel::new(sigma_x().scale_real(omega / 2.0)).map_err(|e| e.to_string())?;
    let period = TAU / omega;
    let times = linspace(0.0, 3.0 * period, 61);
    let traj = evolve(&DensityMatrix::basis_state(2, 0), &model, &times, period / 200.0).map_err(|e| e.to_string())?;
    let err = times
        .iter()
        .zip(traj.population(1))
        .map(|(t, p)| (p - (omega * t / 2.0).sin().powi(2)).abs())
        .fold(0.0, f64::max);
    ensure(err < 1e-6, format!("max error {err:.2e}"))
}

fn eigensystem() -> Check {
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let x = k as f64;
        let p = SpinSystemParams::new(600.0 + 70.0 * x, -50.0 + 5.0 * x)
            .with_bz(-4.0 + 0.4 * x)
            .with_nucleus(HyperfineTensor::zz(3.0 - 0.3 * x));
        let numeric = eigendecompose_hermitian(&build_ground_hamiltonian(&p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?.values;
        let mut analytic = analytic_spectrum(&p).map_err(|e| e.to_string())?.absolute_energies();
        analytic.sort_by(f64::total_cmp);
        for (a, b) in numeric.iter().zip(&analytic) {
            worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(1.0));
        }
    }
    ensure(worst <= 1e-9, format!("worst relative error {worst:.2e}"))
}

fn zefoz_field() -> Check {
    let p = SpinSystemParams::new(1333.9535, 18.4195).with_nucleus(HyperfineTensor::zz(1.0));
    let b = find_zefoz_field(&p, NuclearBranch::Up).map_err(|e| e.to_string())?;
    let want = -1.0 / (2.0 * MU_B_MHZ_PER_MT);
    ensure((b - want).abs() < 1e-6, format!("B_z* = {b:.6} mT"))
}

fn quadrature(n: i64, x1: f64, x2: f64, phi: f64) -> Complex64 {
    let m = 4096;
    (0..m)
        .map(|k| {
            let th = TAU * k as f64 / m as f64;
            Complex64::from_polar(1.0, n as f64 * th - x1 * th.sin() - x2 * (2.0 * th + phi).sin())
        })
        .sum::<Complex64>()
        / m as f64
}

fn generalized_bessel() -> Check {
    let mut worst: f64 = 0.0;
    for k in 0..40 {
        let x = k as f64;
        let (n, x1, x2, phi) = ((k % 31) as i64 - 15, -10.0 + 0.5 * x, 8.0 - 0.4 * x, 0.17 * x);
        worst = worst.max((generalized_bessel_2d(n, x1, x2, phi) - quadrature(n, x1, x2, phi)).norm());
        let period = (generalized_bessel_2d(n, x1, x2, phi + TAU) - generalized_bessel_2d(n, x1, x2, phi)).norm();
        worst = worst.max(period);
    }
    ensure(worst < 1e-9, format!("worst deviation {worst:.2e}"))
}

fn ple_linewidth() -> Check {
    let p = desk_bloch();
    let r = ple_scan(&linspace(-10.0, 10.0, 401), &EmissionSettings::continuous(0.05, p), None).map_err(|e| e.to_string())?;
    let f = fit_lorentzian(&r).map_err(|e| e.to_string())?;
    let ratio = f.fwhm * p.t2() / 2.0;
    ensure((ratio - 1.0).abs() < 0.01, format!("FWHM·T2/2 = {ratio:.5}"))
}

fn scale_invariance() -> Check {
    let base = linspace(-5.0, 5.0, 21);
    let spectrum = |lambda: f64| -> Result<Vec<f64>, String> {
        let s = EmissionSettings::pulsed(1.5, desk_bloch(), 3.0).rescaled(lambda);
        let deltas: Vec<f64> = base.iter().map(|d| d * lambda).collect();
        let r = ple_scan(&deltas, &s, None).map_err(|e| e.to_string())?;
        let max = r.values.iter().cloned().fold(0.0, f64::max);
        Ok(r.values.iter().map(|v| v / max).collect())
    };
    let reference = spectrum(1.0)?;
    let mut worst: f64 = 0.0;
    for lambda in [0.1, 10.0] {
        for (a, b) in spectrum(lambda)?.iter().zip(&reference) {
            worst = worst.max((a - b).abs());
        }
    }
    ensure(worst < 1e-6, format!("worst deviation {worst:.2e}"))
}

fn config_round_trip() -> Check {
    for e in Experiment::ALL {
        let resolved = Config::default().resolve(e).map_err(|err| format!("{e}: {err}"))?;
        let text = resolved.to_string();
        let back = Config::parse(&text).map_err(|err| format!("{e}: {err}"))?;
        if back != resolved || back.to_string() != text {
            return Err(format!("{e}: canonical text does not round trip"));
        }
    }
    Ok(format!("{} experiments", Experiment::ALL.len()))
}

fn small_map() -> Result<ScanResult, String> {
    let omega = TAU * 2.0;
    let s = EmissionSettings::pulsed(0.5, desk_bloch(), 3.0);
    lzs_map(&[0.0, omega, 2.5 * omega], &linspace(-3.0 * omega, 3.0 * omega, 9), omega, &s).map_err(|e| e.to_string())
}

fn scan_round_trip() -> Check {
    let scan = small_map()?.with_metadata("config", "experiment = lzs\nseed = 0\n");
    let path = Path::new("selftest");
    let csv = parse_csv(&render_csv(&scan), Some(&render_meta(&scan)), path).map_err(|e| e.to_string())?;
    let json = parse_json(&render_json(&scan), path).map_err(|e| e.to_string())?;
    ensure(csv == scan && json == scan, "CSV and JSON".into())
}

fn thread_independence() -> Check {
    let run = |threads: usize| -> Result<Vec<u64>, String> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
        Ok(pool.install(small_map)?.values.iter().map(|v| v.to_bits()).collect())
    };
    ensure(run(1)? == run(3)?, "1 vs 3 threads bit-identical".into())
}

fn predicted_lines() -> Check {
    let fs = FineStructureParams::from_ground_transitions(1352.373, 36.839, 970.0, -483.0);
    let lines = predict_ple_lines(&fs).map_err(|e| e.to_string())?;
    let want = [0.0, -865.373, 137.466];
    let ok = lines.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-3) && lines[1] < 0.0 && lines[2] > 0.0;
    ensure(ok, format!("{:.3} {:.3} {:.3} MHz", lines[0], lines[1], lines[2]))
}

fn physicality() -> Check {
    let h = health::snapshot();
    let ok = h.checked_states > 0 && h.max_trace_drift <= 1e-7 && h.max_hermiticity_error <= 1e-10 && h.min_eigenvalue >= -1e-7;
    ensure(
        ok,
        format!(
            "{} states, trace {:.1e}, hermiticity {:.1e}, min eigenvalue {:.1e}",
            h.checked_states, h.max_trace_drift, h.max_hermiticity_error, h.min_eigenvalue + 0.0
        ),
    )
}

/// Runs every check and returns the report with the number of failures.
pub fn run_selftest() -> (String, usize) {
    health::reset();
    let checks: [NamedCheck; 11] = [
        ("rabi_oracle", rabi_oracle),
        ("eigensystem", eigensystem),
        ("zefoz_field", zefoz_field),
        ("generalized_bessel", generalized_bessel),
        ("ple_linewidth", ple_linewidth),
        ("scale_invariance", scale_invariance),
        ("config_round_trip", config_round_trip),
        ("scan_round_trip", scan_round_trip),
        ("thread_independence", thread_independence),
        ("predicted_lines", predicted_lines),
        ("physicality", physicality),
    ];
    let mut report = String::new();
    let mut failures = 0;
    for (name, check) in checks {
        let (status, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        writeln!(report, "{status} {name}: {detail}").ok();
    }
    writeln!(report, "{} of {} checks passed", checks.len() - failures, checks.len()).ok();
    (report, failures)
}
