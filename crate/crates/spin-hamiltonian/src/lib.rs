//! Ground-state spin-1 physics: Hamiltonian construction, closed-form
//! eigensystem, ZEFOZ basis and field dispersion.
//!
//! Energies are linear frequencies in MHz and fields are in mT.

pub mod analytic;
pub mod dispersion;
pub mod error;
pub mod hamiltonian;
pub mod params;
pub mod zefoz;

pub use analytic::{analytic_spectrum, effective_field, AnalyticLevel, AnalyticSpectrum, ElectronLevel, NuclearBranch};
pub use dispersion::{find_zefoz_field, find_zefoz_field_in, transition_dispersion, zero_effective_field, Dispersion};
pub use error::SpinError;
pub use hamiltonian::{build_ground_hamiltonian, electron_hamiltonian, nuclear_block};
pub use params::{HyperfineTensor, SpinSystemParams, MU_B_MHZ_PER_MT};
pub use zefoz::{zefoz_basis, zefoz_hamiltonian, ZefozBasis};
