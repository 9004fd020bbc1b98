//! Dense complex linear algebra and standard quantum operators.

pub mod density;
pub mod eigen;
pub mod error;
pub mod hermitian;
pub mod linalg;
pub mod lsq;
pub mod matrix;
pub mod operators;

pub use density::{DensityMatrix, Physicality};
pub use eigen::{jacobi_eigh, Eigensystem};
pub use error::QuantumError;
pub use hermitian::{eigendecompose_hermitian, FrequencyUnit, HermitianOperator};
pub use matrix::{tensor_product, tensor_vec, ComplexMatrix};
pub use num_complex::Complex64;
pub use operators::spin1_operators;
