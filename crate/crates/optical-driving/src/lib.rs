//! Optical two-level driving: Hamiltonians in the lab and rotating frames,
//! Bessel and generalized Bessel functions, and sideband ladders.

pub mod bessel;
pub mod drive;
pub mod error;
pub mod generalized;
pub mod sidebands;

pub use bessel::{bessel_j_ladder, bessel_jn};
pub use drive::{lab_frame_hamiltonian, rotating_frame_hamiltonian, stark_amplitude, AcDrive, AcTone, OpticalTlsParams};
pub use error::DriveError;
pub use generalized::{generalized_bessel_2d, generalized_bessel_2d_ladder};
pub use sidebands::{sideband_amplitudes, SidebandLadder};
