use thiserror::Error;

/// Errors produced by the numerical routines and the file loaders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off:.3e})")]
    NonConvergence { sweeps: usize, off: f64 },

    #[error("unitary diagonalization failed after {attempts} random combinations (off-diagonal {off:.3e})")]
    DegenerateCombination { attempts: usize, off: f64 },

    #[error("spectrum reaches -1: eigenvalue argument {arg:.12} is within tol_pi_gap of pi")]
    SpectrumAtMinusOne { arg: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} outside the supported range 1..=64")]
    InvalidDimension(usize),

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not hermitian: residual {residual:.3e} exceeds tol_sym {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("matrix is not skew-hermitian: residual {residual:.3e} exceeds tol_sym {tol:.3e}")]
    NotSkewHermitian { residual: f64, tol: f64 },

    #[error("matrix is not unitary: residual {residual:.3e} exceeds tol_unitary {tol:.3e}")]
    NotUnitary { residual: f64, tol: f64 },

    #[error("phase shift {shift} outside the admissible interval ({lo}, {hi})")]
    ShiftOutOfRange { shift: f64, lo: f64, hi: f64 },

    #[error("vector is not a unit vector: norm {norm}")]
    NotUnit { norm: f64 },

    #[error("vector is not a norming eigenvector: residual {residual:.3e}")]
    NotNormingVector { residual: f64 },

    #[error("vector is not a common eigenvector of the curve generators: residual {residual:.3e}")]
    NotCommonEigenvector { residual: f64 },

    #[error("invalid angles: {0}")]
    InvalidAngles(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
