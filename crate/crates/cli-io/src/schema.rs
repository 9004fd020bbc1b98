//! Valid keys and defaults for each subcommand. Frequencies are linear (MHz),
//! times carry their unit in the key name.

use std::fmt;
use std::str::FromStr;

use crate::config::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    Ple,
    Lzs,
    Bichromatic,
    OpticalRabi,
    SpinRabi,
    Ramsey,
    Echo,
    Zefoz,
    Fit,
    Selftest,
}

impl Experiment {
    pub const ALL: [Experiment; 10] = [
        Experiment::Ple,
        Experiment::Lzs,
        Experiment::Bichromatic,
        Experiment::OpticalRabi,
        Experiment::SpinRabi,
        Experiment::Ramsey,
        Experiment::Echo,
        Experiment::Zefoz,
        Experiment::Fit,
        Experiment::Selftest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Ple => "ple",
            Experiment::Lzs => "lzs",
            Experiment::Bichromatic => "bichromatic",
            Experiment::OpticalRabi => "optical-rabi",
            Experiment::SpinRabi => "spin-rabi",
            Experiment::Ramsey => "ramsey",
            Experiment::Echo => "echo",
            Experiment::Zefoz => "zefoz",
            Experiment::Fit => "fit",
            Experiment::Selftest => "selftest",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Experiment::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| format!("unknown experiment `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Default {
    Number(f64),
    Flag(bool),
    Word(&'static str),
}

impl Default {
    pub fn value(&self) -> Value {
        match *self {
            Default::Number(x) => Value::Number(x),
            Default::Flag(b) => Value::Bool(b),
            Default::Word(w) => Value::Text(w.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeySpec {
    pub key: &'static str,
    pub default: Default,
    /// Allowed words; empty means any text.
    pub choices: &'static [&'static str],
    pub doc: &'static str,
}

const fn num(key: &'static str, x: f64, doc: &'static str) -> KeySpec {
    KeySpec { key, default: Default::Number(x), choices: &[], doc }
}

const fn word(key: &'static str, w: &'static str, choices: &'static [&'static str], doc: &'static str) -> KeySpec {
    KeySpec { key, default: Default::Word(w), choices, doc }
}

const fn flag(key: &'static str, b: bool, doc: &'static str) -> KeySpec {
    KeySpec { key, default: Default::Flag(b), choices: &[], doc }
}

fn optics(rabi_mhz: f64, shelving_rate_per_ns: f64) -> Vec<KeySpec> {
    vec![
        num("optics.t1_ns", 14.0, "excited-state lifetime"),
        num("optics.t2_ns", 26.0, "optical coherence time, at most 2·T1"),
        num("optics.shelving_rate_per_ns", shelving_rate_per_ns, "decay rate into the dark shelf, Γ"),
        num("optics.repump_rate_per_ns", 0.0, "return rate from the shelf to the ground state"),
        num("optics.rabi_mhz", rabi_mhz, "optical Rabi frequency Ω/2π"),
    ]
}

fn readout() -> Vec<KeySpec> {
    vec![
        word("readout.mode", "pulsed", &["pulsed", "cw"], "pulsed photon count or steady-state rate"),
        num("readout.window_ns", 42.0, "laser pulse length for pulsed readout"),
        num("solver.step_factor", 0.25, "integration step times the fastest frequency"),
    ]
}

fn detuning_grid(min: f64, max: f64, points: f64) -> Vec<KeySpec> {
    vec![
        num("scan.delta_min_mhz", min, "first laser detuning δ/2π"),
        num("scan.delta_max_mhz", max, "last laser detuning δ/2π"),
        num("scan.delta_points", points, "number of detunings"),
    ]
}

fn zero_field() -> Vec<KeySpec> {
    vec![
        num("spin.d_mhz", 1333.9535, "ground-state zero-field splitting D"),
        num("spin.e_mhz", 18.4195, "ground-state transverse splitting E"),
    ]
}

fn noise(tau_max_us: f64, points: f64, shots: f64) -> Vec<KeySpec> {
    vec![
        word("noise.kind", "quasi_static", &["none", "quasi_static", "ornstein_uhlenbeck"], "spin frequency noise model"),
        num("noise.t2_star_us", 74.0, "quasi-static noise width as a Ramsey T2*"),
        num("noise.echo_t2_us", 222.0, "Ornstein-Uhlenbeck noise calibrated to this echo decay time"),
        num("noise.echo_exponent", 2.0, "local stretch exponent of the echo decay at its 1/e time"),
        num("scan.tau_max_us", tau_max_us, "longest free-evolution time"),
        num("scan.points", points, "number of free-evolution times from 0"),
        num("shots", shots, "Monte Carlo noise realizations"),
    ]
}

fn bloch_fit_inputs() -> Vec<KeySpec> {
    vec![
        num("optics.rabi_mhz", 100.0, "optical Rabi frequency Ω/2π"),
        num("laser.detuning_mhz", 0.0, "laser detuning δ/2π"),
        num("pulse.length_ns", 80.0, "rectangular laser pulse length"),
        num("pulse.tail_ns", 40.0, "recorded time after the pulse"),
        num("pulse.bin_ns", 1.0, "histogram bin width"),
    ]
}

pub fn schema_for(experiment: Experiment) -> Vec<KeySpec> {
    let mut keys = match experiment {
        Experiment::Ple => [optics(5.0, 0.0), readout(), detuning_grid(-50.0, 50.0, 201.0)].concat(),
        Experiment::Lzs => [optics(5.0, 0.0), readout(), detuning_grid(-2100.0, 2100.0, 241.0)].concat(),
        Experiment::Bichromatic => [optics(5.0, 0.0), readout(), detuning_grid(-3000.0, 3000.0, 301.0)].concat(),
        Experiment::OpticalRabi => {
            let mut k = optics(100.0, 1.0 / 150.0);
            k.retain(|s| s.key != "optics.rabi_mhz");
            [k, bloch_fit_inputs()].concat()
        }
        Experiment::SpinRabi => zero_field(),
        Experiment::Ramsey | Experiment::Echo => Vec::new(),
        Experiment::Zefoz => zero_field(),
        Experiment::Fit => bloch_fit_inputs(),
        Experiment::Selftest => Vec::new(),
    };
    keys.extend(match experiment {
        Experiment::Ple => vec![
            num("drive.amplitude_mhz", 0.0, "ac Stark amplitude 𝒜/2π; 0 disables the drive"),
            num("drive.frequency_mhz", 700.0, "ac drive frequency ω/2π"),
        ],
        Experiment::Lzs => vec![
            num("drive.frequency_mhz", 700.0, "ac drive frequency ω/2π"),
            num("scan.ratio_min", 0.0, "first 𝒜/ω"),
            num("scan.ratio_max", 6.0, "last 𝒜/ω"),
            num("scan.ratio_points", 61.0, "number of amplitudes"),
        ],
        Experiment::Bichromatic => vec![
            num("drive.frequency1_mhz", 1000.0, "first tone ω₁/2π; the second is at 2ω₁"),
            num("drive.ratio", 2.4048, "𝒜ᵢ/ωᵢ for both tones"),
            num("scan.phi_points", 25.0, "relative phases spanning [0, 2π]"),
        ],
        Experiment::OpticalRabi => vec![num("counts.total", 0.0, "Poisson-sample this many counts; 0 keeps the noiseless trace")],
        Experiment::SpinRabi => vec![
            word("spin.transition", "zero_plus", &["zero_plus", "plus_minus"], "driven pair"),
            word("spin.model", "two_level", &["two_level", "full_three_level"], "driven pair only, or all three levels"),
            num("spin.rabi_mhz", 1.0, "microwave Rabi frequency Ω/2π"),
            word("field.weights", "auto", &[], "`auto` or \"x,y,z\" field components along S'x, S'y, S'z"),
            num("scan.duration_max_us", 4.0, "longest pulse"),
            num("scan.points", 201.0, "number of pulse durations from 0"),
        ],
        Experiment::Ramsey => [noise(150.0, 151.0, 4000.0), vec![num("ramsey.detuning_mhz", 0.1, "microwave detuning")]].concat(),
        Experiment::Echo => noise(500.0, 51.0, 2000.0),
        Experiment::Zefoz => vec![
            num("spin.g", 2.0, "electron g-factor"),
            num("hyperfine.azz_mhz", 1.0, "longitudinal hyperfine coupling to one spin-1/2 nucleus"),
            num("scan.bz_span_mt", 0.5, "dispersion scan half-width around the ZEFOZ field"),
            num("scan.points", 101.0, "number of fields"),
        ],
        Experiment::Fit => vec![
            word("fit.input", "", &[], "scan file (.json or .csv) to fit"),
            word("fit.model", "lorentzian", &["lorentzian", "bloch", "gaussian", "exponential", "stretched"], "fit function"),
            flag("fit.oscillating", false, "envelope fits: include a cosine fringe"),
            word("fit.weighting", "poisson", &["uniform", "poisson"], "Bloch fits: residual weighting"),
        ],
        _ => Vec::new(),
    });
    keys
}
