//! The unit sphere of `C^n`, the orbit map `u ↦ uξ` and norming functionals.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{expm_skew, inner, op_norm, vec_norm, SkewHermitianMatrix, UnitaryMatrix, I};

const UNIT_TOL: f64 = 1e-10;

/// A vector of norm one within `1e-10`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitVector(Vec<Complex64>);

impl UnitVector {
    pub fn new(v: Vec<Complex64>) -> Result<Self> {
        let norm = vec_norm(&v);
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self(v))
    }

    /// Scales a nonzero vector to unit length.
    pub fn normalized(v: Vec<Complex64>) -> Result<Self> {
        let norm = vec_norm(&v);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self(v.into_iter().map(|z| z / norm).collect()))
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            expected: a,
            found: b,
        });
    }
    Ok(())
}

/// Great-circle distance `arccos(Re⟨ξ, η⟩)` on the unit sphere of `C^n`
/// viewed as a real inner-product space.
pub fn sphere_distance(xi: &UnitVector, eta: &UnitVector) -> Result<f64> {
    check_dims(xi.dim(), eta.dim())?;
    Ok(inner(&xi.0, &eta.0).re.clamp(-1.0, 1.0).acos())
}

/// `ρ_ξ(u) = uξ`.
pub fn orbit_map(u: &UnitaryMatrix, xi: &UnitVector) -> Result<UnitVector> {
    check_dims(u.dim(), xi.dim())?;
    Ok(UnitVector(u.apply(&xi.0)))
}

/// `ψ_ξ(z) = ⟨−izξ, ξ⟩`, real for skew-hermitian `z`.
pub fn norming_functional(xi: &UnitVector, z: &SkewHermitianMatrix) -> Result<f64> {
    check_dims(z.dim(), xi.dim())?;
    let zx: Vec<Complex64> = z.as_matrix().mul_vec(&xi.0).into_iter().map(|c| -I * c).collect();
    let value = inner(&zx, &xi.0);
    debug_assert!(value.im.abs() <= 1e-10 * (1.0 + op_norm(z.as_matrix())));
    Ok(value.re)
}

/// Finite-difference check of `ψ_ξ(e^{−y}·exp_{*y}x) = ψ_ξ(x)` for a norming
/// eigenvector `ξ` of `y`. Returns the absolute residual.
pub fn gauss_lemma_check(
    y: &SkewHermitianMatrix,
    x: &SkewHermitianMatrix,
    xi: &UnitVector,
    eps: f64,
) -> Result<f64> {
    check_dims(y.dim(), x.dim())?;
    check_dims(y.dim(), xi.dim())?;
    if !(1e-6..=1e-3).contains(&eps) {
        return Err(Error::InvalidArgument(format!(
            "finite-difference step {eps} outside [1e-6, 1e-3]"
        )));
    }
    let norm = op_norm(y.as_matrix());
    let yxi = y.as_matrix().mul_vec(&xi.0);
    let residual = yxi
        .iter()
        .zip(&xi.0)
        .map(|(a, b)| (a - I * norm * b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual > 1e-6 {
        return Err(Error::NotNormingVector { residual });
    }

    let plus = expm_skew(&y.add(&x.scale(eps)))?;
    let minus = expm_skew(&y.add(&x.scale(-eps)))?;
    let derivative = (plus.as_matrix() - minus.as_matrix()).scale_re(0.5 / eps);
    let pulled = &expm_skew(&y.neg())?.into_matrix() * &derivative;
    let w = SkewHermitianMatrix::from_skew_part(&pulled);
    Ok((norming_functional(xi, &w)? - norming_functional(xi, x)?).abs())
}
