//! Figure-level numerical experiments: PLE spectra, LZS and bichromatic
//! maps, optical Rabi traces, and the fits used to analyse them.

pub mod bichromatic;
pub mod emission;
pub mod error;
pub mod lines;
pub mod lorentzian;
pub mod lzs;
pub mod peaks;
pub mod ple;
pub mod rabi_trace;
pub mod scan;

pub use bichromatic::{bichromatic_drive, bichromatic_map, sideband_height};
pub use emission::{emission_point, EmissionSettings, Readout, DEFAULT_STEP_FACTOR};
pub use error::ExperimentError;
pub use lines::{predict_ple_lines, FineStructureParams};
pub use lorentzian::{fit_lorentzian, fit_lorentzian_xy, lorentzian, LorentzianFit};
pub use lzs::{band_integrated_intensity, lzs_map};
pub use peaks::{find_minima, find_peaks, noise_floor, Peak};
pub use ple::ple_scan;
pub use rabi_trace::{fit_bloch_parameters, optical_rabi_trace, poisson_counts, BlochFit, RabiTraceSettings, Weighting};
pub use scan::{Axis, ScanResult};
