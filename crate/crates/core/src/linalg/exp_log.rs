use std::f64::consts::PI;

use num_complex::Complex64;

use super::eig::{hermitian_eig, unitary_eig, SpectralDecomposition};
use super::matrix::{ComplexMatrix, SkewHermitianMatrix, UnitaryMatrix};
use crate::error::{Error, Result};
use crate::tol;

/// `e^x` for skew-hermitian `x`, computed as `V·diag(e^{iθ})·V*` from the
/// eigen-decomposition of `−ix`.
pub fn expm_skew(x: &SkewHermitianMatrix) -> Result<UnitaryMatrix> {
    let eig = hermitian_eig(&x.to_hermitian())?;
    let phases: Vec<Complex64> = eig
        .values
        .iter()
        .map(|&t| Complex64::from_polar(1.0, t))
        .collect();
    let v = eig.vectors.as_matrix();
    let u = &(v * &ComplexMatrix::from_diag(&phases)) * &v.adjoint();
    Ok(UnitaryMatrix::new_unchecked(u))
}

/// Principal logarithm of a unitary whose spectrum stays away from −1.
pub fn logm_principal(u: &UnitaryMatrix) -> Result<SkewHermitianMatrix> {
    logm_from_decomposition(&unitary_eig(u)?)
}

pub fn logm_from_decomposition(sd: &SpectralDecomposition) -> Result<SkewHermitianMatrix> {
    sd.ensure_away_from_minus_one()?;
    let logs: Vec<Complex64> = sd
        .eigenvalues
        .iter()
        .map(|z| Complex64::new(0.0, z.arg()))
        .collect();
    let v = sd.eigenvectors.as_matrix();
    let x = &(v * &ComplexMatrix::from_diag(&logs)) * &v.adjoint();
    debug_assert!(logs.iter().all(|l| l.im.abs() < PI));
    Ok(SkewHermitianMatrix::from_skew_part(&x))
}

/// Checks `expm_skew(x) ≈ u` at `tol_roundtrip`.
pub fn check_roundtrip(u: &UnitaryMatrix, x: &SkewHermitianMatrix) -> Result<f64> {
    let back = expm_skew(x)?;
    let err = back.as_matrix().max_diff(u.as_matrix());
    if err > tol::ROUNDTRIP {
        return Err(Error::Inconsistent(format!(
            "exp(log u) differs from u by {err:.3e} > tol_roundtrip"
        )));
    }
    Ok(err)
}
