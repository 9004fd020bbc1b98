//! Ground-state spin experiments: microwave Rabi, Ramsey and Hahn echo
//! under classical detuning noise, plus decay-envelope fitting.

pub mod error;
pub mod fit;
pub mod noise;
pub mod rabi;
pub mod rng;
pub mod sequences;

pub use error::SpinDynamicsError;
pub use fit::{fit_envelope, fit_envelope_xy, EnvelopeFit, EnvelopeShape};
pub use noise::{calibrate_ou_echo, ou_echo_chi, sample_noise, NoiseKind, NoiseModel};
pub use rabi::{spin_rabi, FieldWeights, RabiModel, SpinTransition};
pub use sequences::{hahn_echo, hahn_echo_with_resolution, ramsey, ramsey_with_resolution, ReadoutContrast, SpinSequenceResult, DEFAULT_POINTS_PER_TAU_C};
