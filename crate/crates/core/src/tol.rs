//! Numerical tolerances shared across the crate.
//!
//! Dimension-dependent tolerances scale linearly with `n`; everything else is
//! absolute. All comparisons are in max-entry norm unless stated otherwise.

/// Hermitian / skew-hermitian symmetry, `‖h − h*‖_max`.
pub fn sym(n: usize) -> f64 {
    1e-12 * n as f64
}

/// Unitarity, `‖u*u − I‖_max`.
pub fn unitary(n: usize) -> f64 {
    1e-10 * n as f64
}

/// Eigen-decomposition residuals.
pub fn resid(n: usize) -> f64 {
    1e-9 * n as f64
}

/// Jacobi stopping threshold on the off-diagonal Frobenius norm.
pub fn jacobi(frobenius: f64) -> f64 {
    1e-13 * frobenius
}

pub const ROUNDTRIP: f64 = 1e-8;

/// Exclusion band around ±π for principal arguments.
pub const PI_GAP: f64 = 1e-8;

/// Agreement of spectral quantities computed along two routes.
pub const SPEC: f64 = 1e-10;

/// Grouping of eigenvalues into the top/bottom eigenspace (radians).
pub const CLUSTER: f64 = 1e-8;

/// Eigenvalue cutoff `1 − SUB` on `P_A P_B P_A` for subspace intersection.
pub const SUB: f64 = 1e-8;

/// Largest tolerated negative slack before a bound counts as violated.
pub const VERDICT: f64 = 1e-9;

/// Equality detection on slacks.
pub const EQ: f64 = 1e-7;

/// Subspace distance accepted between an intersection of eigenspaces and the
/// eigenspace it must equal.
pub const EIGENSPACE: f64 = 1e-8;

pub const MAX_SWEEPS: usize = 60;

pub const MAX_DIM: usize = 64;
