//! Spectral arguments of unitaries and generators, centering, eigenspaces
//! and the distance formulas on the unitary group.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, hermitian_norm, inner, logm_from_decomposition, op_norm, unitary_eig,
    ComplexMatrix, HermitianMatrix, SkewHermitianMatrix, SpectralDecomposition, UnitaryMatrix,
    I, ZERO,
};
use crate::tol;

/// An angle in radians.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Angle(pub f64);

impl Angle {
    pub fn radians(self) -> f64 {
        self.0
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> f64 {
        a.0
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12}", self.0)
    }
}

/// Orthonormal basis of a subspace of `C^n`, stored as `k` column vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Complex64>>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    /// Wraps columns that must already be orthonormal within `tol_unitary`.
    pub fn from_orthonormal(ambient_dim: usize, basis: Vec<Vec<Complex64>>) -> Result<Self> {
        if let Some(bad) = basis.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: bad.len(),
            });
        }
        let tol = tol::unitary(ambient_dim);
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                let residual = (inner(a, b) - target).norm();
                if residual > tol {
                    return Err(Error::NotUnitary { residual, tol });
                }
            }
        }
        Ok(Self { ambient_dim, basis })
    }

    /// Span of arbitrary vectors, orthonormalized by Gram–Schmidt with
    /// rank-deficient directions dropped.
    pub fn span(ambient_dim: usize, vectors: &[Vec<Complex64>]) -> Self {
        let mut basis: Vec<Vec<Complex64>> = Vec::new();
        for v in vectors {
            let mut w = v.clone();
            for _ in 0..2 {
                for b in &basis {
                    let p = inner(&w, b);
                    for (wi, bi) in w.iter_mut().zip(b) {
                        *wi -= p * bi;
                    }
                }
            }
            let norm = crate::linalg::vec_norm(&w);
            if norm > 1e-10 {
                basis.push(w.into_iter().map(|z| z / norm).collect());
            }
        }
        Self {
            ambient_dim,
            basis,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Complex64>] {
        &self.basis
    }

    /// Orthogonal projection `Σ b_k b_k*`.
    pub fn projector(&self) -> ComplexMatrix {
        let n = self.ambient_dim;
        ComplexMatrix::from_fn(n, |r, c| {
            self.basis.iter().map(|b| b[r] * b[c].conj()).sum()
        })
    }

    /// `w·self`.
    pub fn transform(&self, w: &UnitaryMatrix) -> Self {
        Self {
            ambient_dim: self.ambient_dim,
            basis: self.basis.iter().map(|b| w.apply(b)).collect(),
        }
    }

    fn check_same_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }
}

/// Spectral data of a unitary away from −1: arguments `θ±` and the
/// eigenspaces `H±`. Computed once from a single decomposition.
#[derive(Clone, Debug)]
pub struct UnitarySpectrum {
    decomposition: SpectralDecomposition,
    args: Vec<f64>,
}

impl UnitarySpectrum {
    pub fn new(u: &UnitaryMatrix) -> Result<Self> {
        Self::from_decomposition(unitary_eig(u)?)
    }

    pub fn from_decomposition(decomposition: SpectralDecomposition) -> Result<Self> {
        decomposition.ensure_away_from_minus_one()?;
        let args = decomposition.args();
        Ok(Self {
            decomposition,
            args,
        })
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomposition
    }

    /// Principal arguments, descending.
    pub fn args(&self) -> &[f64] {
        &self.args
    }

    pub fn theta_plus(&self) -> Angle {
        Angle(self.args[0])
    }

    pub fn theta_minus(&self) -> Angle {
        Angle(*self.args.last().expect("dimension is at least one"))
    }

    pub fn eigenspace_plus(&self) -> Subspace {
        self.cluster(self.args[0])
    }

    pub fn eigenspace_minus(&self) -> Subspace {
        self.cluster(*self.args.last().expect("dimension is at least one"))
    }

    fn cluster(&self, target: f64) -> Subspace {
        let v = self.decomposition.eigenvectors.as_matrix();
        let basis = self
            .args
            .iter()
            .enumerate()
            .filter(|(_, a)| (*a - target).abs() <= tol::CLUSTER)
            .map(|(k, _)| v.column(k))
            .collect();
        Subspace {
            ambient_dim: v.dim(),
            basis,
        }
    }

    /// `max{θ₊, −θ₋}`.
    pub fn dist_identity(&self) -> f64 {
        self.theta_plus().0.max(-self.theta_minus().0)
    }

    pub fn log(&self) -> SkewHermitianMatrix {
        logm_from_decomposition(&self.decomposition).expect("spectrum checked at construction")
    }
}

/// Eigen-data of the hermitian matrix `−ix` for a generator `x`.
#[derive(Clone, Debug)]
pub struct GeneratorSpectrum {
    values: Vec<f64>,
    vectors: UnitaryMatrix,
}

impl GeneratorSpectrum {
    pub fn new(x: &SkewHermitianMatrix) -> Result<Self> {
        let eig = hermitian_eig(&x.to_hermitian())?;
        Ok(Self {
            values: eig.values,
            vectors: eig.vectors,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn phi_plus(&self) -> Angle {
        Angle(self.values[0])
    }

    pub fn phi_minus(&self) -> Angle {
        Angle(*self.values.last().expect("dimension is at least one"))
    }

    /// Operator norm of the generator, `max{φ₊, −φ₋}`.
    pub fn norm(&self) -> f64 {
        self.phi_plus().0.max(-self.phi_minus().0)
    }

    /// `e^{h·x}` from the stored eigen-decomposition of `−ix`.
    pub fn exp_scaled(&self, h: f64) -> UnitaryMatrix {
        let phases: Vec<Complex64> = self
            .values
            .iter()
            .map(|&t| Complex64::from_polar(1.0, h * t))
            .collect();
        let v = self.vectors.as_matrix();
        let u = &(v * &ComplexMatrix::from_diag(&phases)) * &v.adjoint();
        UnitaryMatrix::new_unchecked(u)
    }

    pub fn eigenspace_plus(&self) -> Subspace {
        self.cluster(self.values[0])
    }

    pub fn eigenspace_minus(&self) -> Subspace {
        self.cluster(*self.values.last().expect("dimension is at least one"))
    }

    fn cluster(&self, target: f64) -> Subspace {
        let v = self.vectors.as_matrix();
        let basis = self
            .values
            .iter()
            .enumerate()
            .filter(|(_, a)| (*a - target).abs() <= tol::CLUSTER)
            .map(|(k, _)| v.column(k))
            .collect();
        Subspace {
            ambient_dim: v.dim(),
            basis,
        }
    }
}

pub fn theta_plus(u: &UnitaryMatrix) -> Result<Angle> {
    Ok(UnitarySpectrum::new(u)?.theta_plus())
}

pub fn theta_minus(u: &UnitaryMatrix) -> Result<Angle> {
    Ok(UnitarySpectrum::new(u)?.theta_minus())
}

/// Largest eigenvalue of `−ix`; not clamped to `(−π, π]`.
pub fn phi_plus(x: &SkewHermitianMatrix) -> Angle {
    GeneratorSpectrum::new(x)
        .expect("Jacobi converges for finite hermitian input")
        .phi_plus()
}

pub fn phi_minus(x: &SkewHermitianMatrix) -> Angle {
    GeneratorSpectrum::new(x)
        .expect("Jacobi converges for finite hermitian input")
        .phi_minus()
}

/// `e^{−i(θ₊+θ₋)/2}·u`, whose spectrum is symmetric about 0.
pub fn center_unitary(u: &UnitaryMatrix) -> Result<UnitaryMatrix> {
    let spec = UnitarySpectrum::new(u)?;
    let mid = 0.5 * (spec.theta_plus().0 + spec.theta_minus().0);
    Ok(u.phase_shift(-mid))
}

/// `x − (i/2)(φ₊(x) + φ₋(x))·I`.
pub fn center_generator(x: &SkewHermitianMatrix) -> SkewHermitianMatrix {
    let spec = GeneratorSpectrum::new(x).expect("Jacobi converges for finite hermitian input");
    center_generator_with(x, &spec)
}

pub(crate) fn center_generator_with(
    x: &SkewHermitianMatrix,
    spec: &GeneratorSpectrum,
) -> SkewHermitianMatrix {
    let mid = 0.5 * (spec.phi_plus().0 + spec.phi_minus().0);
    if mid == 0.0 {
        return x.clone();
    }
    let mut m = x.as_matrix().clone();
    for k in 0..m.dim() {
        m[(k, k)] -= I * mid;
    }
    SkewHermitianMatrix::new_unchecked(m)
}

pub fn eigenspace_plus(u: &UnitaryMatrix) -> Result<Subspace> {
    Ok(UnitarySpectrum::new(u)?.eigenspace_plus())
}

pub fn eigenspace_minus(u: &UnitaryMatrix) -> Result<Subspace> {
    Ok(UnitarySpectrum::new(u)?.eigenspace_minus())
}

pub fn generator_eigenspace_plus(x: &SkewHermitianMatrix) -> Result<Subspace> {
    Ok(GeneratorSpectrum::new(x)?.eigenspace_plus())
}

pub fn generator_eigenspace_minus(x: &SkewHermitianMatrix) -> Result<Subspace> {
    Ok(GeneratorSpectrum::new(x)?.eigenspace_minus())
}

/// Eigenvectors of `P_A·P_B·P_A` with eigenvalue at least `1 − tol_sub`.
pub fn subspace_intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.check_same_ambient(b)?;
    if a.dim() == 0 || b.dim() == 0 {
        return Ok(Subspace::zero(a.ambient_dim));
    }
    let pa = a.projector();
    let pb = b.projector();
    let m = &(&pa * &pb) * &pa;
    let eig = hermitian_eig(&HermitianMatrix::from_hermitian_part(&m))?;
    let v = eig.vectors.as_matrix();
    let basis = eig
        .values
        .iter()
        .enumerate()
        .take_while(|(_, &val)| val >= 1.0 - tol::SUB)
        .map(|(k, _)| v.column(k))
        .collect();
    Ok(Subspace {
        ambient_dim: a.ambient_dim,
        basis,
    })
}

/// Intersection of a nonempty family, folded left to right.
pub fn subspace_intersect_all<'a, I>(spaces: I) -> Result<Subspace>
where
    I: IntoIterator<Item = &'a Subspace>,
{
    let mut iter = spaces.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::InvalidArgument("empty subspace family".into()))?
        .clone();
    iter.try_fold(first, |acc, s| subspace_intersect(&acc, s))
}

/// `‖P_A − P_B‖`; zero iff the subspaces coincide.
pub fn subspace_distance(a: &Subspace, b: &Subspace) -> Result<f64> {
    a.check_same_ambient(b)?;
    let diff = &a.projector() - &b.projector();
    Ok(hermitian_norm(&diff.hermitian_part()))
}

/// Rectifiable distance from the identity, `max{θ₊(u), −θ₋(u)}`.
pub fn dist_identity(u: &UnitaryMatrix) -> Result<f64> {
    Ok(UnitarySpectrum::new(u)?.dist_identity())
}

/// `d(u, v) = d(id, u*v)` by left invariance.
pub fn dist(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<f64> {
    u.as_matrix().check_same_dim(v.as_matrix())?;
    dist_identity(&u.adjoint().mul(v))
}

/// Operator norm of the principal logarithm; the second route to
/// [`dist_identity`].
pub fn log_norm(u: &UnitaryMatrix) -> Result<f64> {
    Ok(op_norm(UnitarySpectrum::new(u)?.log().as_matrix()))
}

/// `(λ + θ₊(u), λ + θ₋(u))`, cross-checked against the spectrum of `e^{iλ}u`.
pub fn phase_shift_spectrum(u: &UnitaryMatrix, lambda: Angle) -> Result<(Angle, Angle)> {
    let spec = UnitarySpectrum::new(u)?;
    let (tp, tm) = (spec.theta_plus().0, spec.theta_minus().0);
    let lo = -PI - tm;
    let hi = PI - tp;
    let l = lambda.0;
    if !(lo < l && l < hi) {
        return Err(Error::ShiftOutOfRange { shift: l, lo, hi });
    }
    let predicted = (Angle(l + tp), Angle(l + tm));
    let direct = UnitarySpectrum::new(&u.phase_shift(l))?;
    let dp = (direct.theta_plus().0 - predicted.0 .0).abs();
    let dm = (direct.theta_minus().0 - predicted.1 .0).abs();
    if dp > tol::SPEC || dm > tol::SPEC {
        return Err(Error::Inconsistent(format!(
            "phase shift mismatch: {dp:.3e}, {dm:.3e}"
        )));
    }
    Ok(predicted)
}

/// Standard basis vector `e_k` of `C^n`.
pub fn basis_vector(n: usize, k: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; n];
    v[k] = Complex64::new(1.0, 0.0);
    v
}
