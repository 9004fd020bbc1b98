//! Resolves a configuration and dispatches it to the experiment modules.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::path::Path;

use experiments::{
    bichromatic_map, fit_bloch_parameters, fit_lorentzian, lzs_map, optical_rabi_trace, ple_scan, poisson_counts, Axis, EmissionSettings,
    RabiTraceSettings, ScanResult, Weighting,
};
use lindblad_solver::BlochParams;
use optical_driving::AcDrive;
use spin_dynamics::{
    calibrate_ou_echo, fit_envelope_xy, hahn_echo, ramsey, spin_rabi, EnvelopeShape, FieldWeights, NoiseModel, RabiModel, SpinSequenceResult,
    SpinTransition,
};
use spin_hamiltonian::{find_zefoz_field, transition_dispersion, zero_effective_field, HyperfineTensor, NuclearBranch, SpinSystemParams};

use crate::config::{format_number, Config, Value};
use crate::error::{CliError, ConfigError};
use crate::output::{read_scan, CONFIG_METADATA_KEY};
use crate::schema::Experiment;
use crate::selftest::run_selftest;

/// Everything a run produces. The report goes to stdout; the scan to the
/// output file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub config: Config,
    pub scan: Option<ScanResult>,
    pub report: Option<String>,
    pub success: bool,
}

/// Builds the resolved configuration: file contents, then `--set`
/// overrides, then the seed and model flags.
pub fn prepare(experiment: Experiment, base: Config, overrides: &[String], seed: Option<u64>, full_three_level: bool) -> Result<Config, CliError> {
    let mut config = base;
    for assignment in overrides {
        config.apply_override(assignment)?;
    }
    if let Some(seed) = seed {
        config.set(crate::config::SEED_KEY, Value::Number(seed as f64));
    }
    if full_three_level {
        if experiment != Experiment::SpinRabi {
            return Err(ConfigError::Invalid {
                key: "spin.model".into(),
                message: "--full3level applies to spin-rabi only".into(),
            }
            .into());
        }
        config.set("spin.model", Value::Text("full_three_level".into()));
    }
    Ok(config.resolve(experiment)?)
}

pub fn execute(experiment: Experiment, config: &Config) -> Result<RunOutput, CliError> {
    let mut out = RunOutput {
        config: config.clone(),
        scan: None,
        report: None,
        success: true,
    };
    match experiment {
        Experiment::Ple => out.scan = Some(ple(config)?),
        Experiment::Lzs => out.scan = Some(lzs(config)?),
        Experiment::Bichromatic => out.scan = Some(bichromatic(config)?),
        Experiment::OpticalRabi => out.scan = Some(optical_rabi(config)?),
        Experiment::SpinRabi => out.scan = Some(spin_rabi_scan(config)?),
        Experiment::Ramsey | Experiment::Echo => out.scan = Some(spin_sequence(experiment, config)?),
        Experiment::Zefoz => {
            let (scan, report) = zefoz(config)?;
            out.scan = Some(scan);
            out.report = Some(report);
        }
        Experiment::Fit => out.report = Some(fit(config)?),
        Experiment::Selftest => {
            let (report, failures) = run_selftest();
            out.report = Some(report);
            out.success = failures == 0;
        }
    }
    if let Some(scan) = out.scan.take() {
        out.scan = Some(
            scan.with_metadata("experiment", experiment.name())
                .with_metadata("seed", config.seed()?)
                .with_metadata(CONFIG_METADATA_KEY, config),
        );
    }
    Ok(out)
}

fn invalid(key: &str, message: impl Into<String>) -> CliError {
    ConfigError::Invalid {
        key: key.into(),
        message: message.into(),
    }
    .into()
}

fn mhz(config: &Config, key: &str) -> Result<f64, CliError> {
    Ok(TAU * config.number(key)?)
}

fn grid(config: &Config, min: &str, max: &str, points: &str) -> Result<Vec<f64>, CliError> {
    let (a, b, n) = (config.number(min)?, config.number(max)?, config.count(points)?);
    match n {
        0 => Err(invalid(points, "need at least one point")),
        1 => Ok(vec![a]),
        _ if b <= a => Err(invalid(max, format!("must exceed {min} = {a}"))),
        _ => Ok((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()),
    }
}

/// 0, …, `end` in `points` steps.
fn ramp(config: &Config, end: &str, points: &str) -> Result<Vec<f64>, CliError> {
    let (b, n) = (config.number(end)?, config.count(points)?);
    if n < 2 || b <= 0.0 {
        return Err(invalid(points, "need ≥ 2 points and a positive end"));
    }
    Ok((0..n).map(|k| b * k as f64 / (n - 1) as f64).collect())
}

fn bloch(config: &Config) -> Result<BlochParams, CliError> {
    let t1 = config.number("optics.t1_ns")? / 1e3;
    let t2 = config.number("optics.t2_ns")? / 1e3;
    let gamma = config.number("optics.shelving_rate_per_ns")? * 1e3;
    let repump = config.number("optics.repump_rate_per_ns")? * 1e3;
    let p = BlochParams::from_t2(t1, t2, gamma).map_err(|e| invalid("optics.t2_ns", e.to_string()))?.with_repump(repump);
    p.validate().map_err(|e| invalid("optics", e.to_string()))?;
    Ok(p)
}

fn emission_settings(config: &Config) -> Result<EmissionSettings, CliError> {
    let p = bloch(config)?;
    let omega = mhz(config, "optics.rabi_mhz")?;
    let mut s = match config.text("readout.mode")? {
        "cw" => EmissionSettings::continuous(omega, p),
        _ => EmissionSettings::pulsed(omega, p, config.number("readout.window_ns")? / 1e3),
    };
    s.step_factor = config.number("solver.step_factor")?;
    s.validate()?;
    Ok(s)
}

fn detunings(config: &Config) -> Result<Vec<f64>, CliError> {
    Ok(grid(config, "scan.delta_min_mhz", "scan.delta_max_mhz", "scan.delta_points")?.into_iter().map(|d| TAU * d).collect())
}

fn ple(config: &Config) -> Result<ScanResult, CliError> {
    let settings = emission_settings(config)?;
    let amplitude = mhz(config, "drive.amplitude_mhz")?;
    let drive = (amplitude != 0.0).then(|| AcDrive::monochromatic(amplitude, TAU * config.number("drive.frequency_mhz").unwrap_or(0.0)));
    if let Some(d) = &drive {
        d.validate().map_err(|e| invalid("drive.frequency_mhz", e.to_string()))?;
    }
    Ok(ple_scan(&detunings(config)?, &settings, drive.as_ref())?)
}

fn lzs(config: &Config) -> Result<ScanResult, CliError> {
    let settings = emission_settings(config)?;
    let omega = mhz(config, "drive.frequency_mhz")?;
    let amplitudes: Vec<f64> = grid(config, "scan.ratio_min", "scan.ratio_max", "scan.ratio_points")?.iter().map(|r| r * omega).collect();
    Ok(lzs_map(&amplitudes, &detunings(config)?, omega, &settings)?)
}

fn bichromatic(config: &Config) -> Result<ScanResult, CliError> {
    let settings = emission_settings(config)?;
    let n = config.count("scan.phi_points")?;
    if n < 2 {
        return Err(invalid("scan.phi_points", "need ≥ 2 phases"));
    }
    let phis: Vec<f64> = (0..n).map(|k| TAU * k as f64 / (n - 1) as f64).collect();
    let omega1 = mhz(config, "drive.frequency1_mhz")?;
    Ok(bichromatic_map(&phis, &detunings(config)?, omega1, config.number("drive.ratio")?, &settings)?)
}

fn rabi_trace_settings(config: &Config) -> Result<RabiTraceSettings, CliError> {
    Ok(RabiTraceSettings {
        omega: mhz(config, "optics.rabi_mhz")?,
        delta: mhz(config, "laser.detuning_mhz")?,
        pulse_length: config.number("pulse.length_ns")? / 1e3,
        tail: config.number("pulse.tail_ns")? / 1e3,
        bin: config.number("pulse.bin_ns")? / 1e3,
    })
}

fn optical_rabi(config: &Config) -> Result<ScanResult, CliError> {
    let trace = optical_rabi_trace(&rabi_trace_settings(config)?, &bloch(config)?)?;
    let total = config.number("counts.total")?;
    if total > 0.0 {
        Ok(poisson_counts(&trace, total, config.seed()?)?)
    } else {
        Ok(trace)
    }
}

fn sequence_scan(result: SpinSequenceResult, axis: &str, value: &str) -> Result<ScanResult, CliError> {
    let shots = result.n_samples;
    Ok(ScanResult::new(Axis::new(axis, experiments::scan::US, result.x), None, (value, ""), result.signal)?.with_metadata("shots", shots))
}

fn field_weights(config: &Config, transition: SpinTransition) -> Result<FieldWeights, CliError> {
    let text = config.text("field.weights")?;
    if text == "auto" {
        return Ok(transition.default_weights());
    }
    let parts: Vec<f64> = text.split(',').map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| invalid("field.weights", "expected `auto` or \"x,y,z\""))?;
    match parts[..] {
        [x, y, z] if parts.iter().all(|v| v.is_finite()) => Ok(FieldWeights { x, y, z }),
        _ => Err(invalid("field.weights", "expected three finite numbers")),
    }
}

fn spin_rabi_scan(config: &Config) -> Result<ScanResult, CliError> {
    let transition: SpinTransition = config.text("spin.transition")?.parse()?;
    let model = match config.text("spin.model")? {
        "full_three_level" => RabiModel::FullThreeLevel {
            d: config.number("spin.d_mhz")?,
            e: config.number("spin.e_mhz")?,
            weights: field_weights(config, transition)?,
        },
        _ => RabiModel::TwoLevel,
    };
    let durations = ramp(config, "scan.duration_max_us", "scan.points")?;
    let r = spin_rabi(transition, mhz(config, "spin.rabi_mhz")?, &durations, &model)?;
    Ok(sequence_scan(r, "duration", "population")?.with_metadata("transition", transition))
}

fn noise_model(config: &Config) -> Result<NoiseModel, CliError> {
    let seed = config.seed()?;
    let model = match config.text("noise.kind")? {
        "none" => NoiseModel::none(),
        "quasi_static" => NoiseModel::from_t2_star(config.number("noise.t2_star_us")?, seed),
        _ => {
            let (sigma, tau_c) = calibrate_ou_echo(config.number("noise.echo_t2_us")?, config.number("noise.echo_exponent")?)?;
            NoiseModel::ornstein_uhlenbeck(sigma, tau_c, seed)
        }
    };
    model.validate()?;
    Ok(model)
}

fn spin_sequence(experiment: Experiment, config: &Config) -> Result<ScanResult, CliError> {
    let taus = ramp(config, "scan.tau_max_us", "scan.points")?;
    let noise = noise_model(config)?;
    let shots = config.count("shots")? as usize;
    let r = match experiment {
        Experiment::Ramsey => ramsey(&taus, mhz(config, "ramsey.detuning_mhz")?, &noise, shots)?,
        _ => hahn_echo(&taus, &noise, shots)?,
    };
    sequence_scan(r, "tau", "signal")
}

fn zefoz(config: &Config) -> Result<(ScanResult, String), CliError> {
    let mut p = SpinSystemParams::new(config.number("spin.d_mhz")?, config.number("spin.e_mhz")?).with_nucleus(HyperfineTensor::zz(config.number("hyperfine.azz_mhz")?));
    p.g = config.number("spin.g")?;
    p.validate()?;
    let field = find_zefoz_field(&p, NuclearBranch::Up)?;
    let closed = zero_effective_field(&p, NuclearBranch::Up);
    let span = config.number("scan.bz_span_mt")?;
    let n = config.count("scan.points")?;
    if n < 2 || span <= 0.0 {
        return Err(invalid("scan.points", "need ≥ 2 points and a positive span"));
    }
    let fields: Vec<f64> = (0..n).map(|k| field - span + 2.0 * span * k as f64 / (n - 1) as f64).collect();
    let d = transition_dispersion(&p, &fields, NuclearBranch::Up)?;
    let scan = ScanResult::new(Axis::new("bz", "mT", d.bz), None, ("zero_plus", experiments::scan::MHZ), d.zero_plus)?;
    let mut report = format!("B_z* = {field:.7} mT\n");
    writeln!(report, "zefoz_field_mt = {}", format_number(field)).ok();
    writeln!(report, "closed_form_mt = {}", format_number(closed)).ok();
    Ok((scan, report))
}

fn fit(config: &Config) -> Result<String, CliError> {
    let input = config.text("fit.input")?;
    if input.is_empty() {
        return Err(invalid("fit.input", "path to a scan file is required"));
    }
    let scan = read_scan(Path::new(input))?;
    let model = config.text("fit.model")?;
    let mut lines: Vec<(&str, f64)> = Vec::new();
    match model {
        "lorentzian" => {
            let f = fit_lorentzian(&scan)?;
            lines.extend([
                ("center", f.center),
                ("fwhm", f.fwhm),
                ("fwhm_mhz", f.fwhm_mhz),
                ("amplitude", f.amplitude),
                ("offset", f.offset),
                ("residual_rms", f.residual_rms),
                ("noise_floor", f.noise_floor),
                ("flagged", f64::from(u8::from(f.flagged))),
            ]);
        }
        "bloch" => {
            let weighting = match config.text("fit.weighting")? {
                "uniform" => Weighting::Uniform,
                _ => Weighting::Poisson,
            };
            let f = fit_bloch_parameters(&scan, &rabi_trace_settings(config)?, weighting)?;
            lines.extend([
                ("t1_ns", f.t1 * 1e3),
                ("t2_ns", f.t2 * 1e3),
                ("t2_star_ns", f.t2_star * 1e3),
                ("shelving_rate_per_ns", f.gamma / 1e3),
                ("lifetime_ratio", f.lifetime_ratio()),
                ("amplitude", f.amplitude),
                ("offset", f.offset),
                ("residual_rms", f.residual_rms),
            ]);
        }
        shape => {
            if scan.is_map() {
                return Err(invalid("fit.input", "envelope fits need a one-dimensional scan"));
            }
            let shape: EnvelopeShape = shape.parse()?;
            let f = fit_envelope_xy(&scan.axis1.values, &scan.values, shape, config.flag("fit.oscillating")?)?;
            lines.extend([
                ("decay_time", f.decay_time),
                ("exponent", f.exponent),
                ("amplitude", f.amplitude),
                ("frequency", f.frequency),
                ("phase", f.phase),
                ("offset", f.offset),
                ("residual_rms", f.residual_rms),
            ]);
        }
    }
    let mut report = format!("fit.model = {model}\n");
    for (k, v) in lines {
        let value = if v.is_finite() { format_number(v) } else { "inf".to_string() };
        writeln!(report, "{k} = {value}").ok();
    }
    Ok(report)
}
