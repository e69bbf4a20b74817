//! Dense complex linear algebra for matrices of dimension at most 64.

mod eig;
mod exp_log;
mod matrix;

pub use eig::{
    hermitian_eig, hermitian_eig_with_sweeps, op_norm, unitary_eig, unitary_eig_with,
    HermitianEig, SpectralDecomposition,
};
pub(crate) use eig::hermitian_norm;
pub use exp_log::{check_roundtrip, expm_skew, logm_from_decomposition, logm_principal};
pub use matrix::{
    inner, vec_norm, ComplexMatrix, HermitianMatrix, SkewHermitianMatrix, UnitaryMatrix,
};
pub(crate) use matrix::{I, ZERO};

pub use num_complex::Complex64;
