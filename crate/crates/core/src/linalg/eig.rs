//! Hermitian eigensolver (cyclic complex Jacobi) and the spectral
//! decomposition of unitaries built on top of it.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::matrix::{ComplexMatrix, HermitianMatrix, UnitaryMatrix, I, ZERO};
use crate::error::{Error, Result};
use crate::tol;

/// Eigenvalues sorted descending with the matching eigenvector columns.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: UnitaryMatrix,
}

struct JacobiOutcome {
    values: Vec<f64>,
    vectors: ComplexMatrix,
    sweeps: usize,
    off: f64,
    converged: bool,
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(h: &ComplexMatrix, max_sweeps: usize) -> JacobiOutcome {
    let n = h.dim();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = tol::jacobi(a.frobenius());

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a);
    while off > threshold && sweeps < max_sweeps {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;

                // Real rotation annihilating |apq| after the phase e^{-iα} is
                // pulled into column q.
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let ph_conj = phase.conj();

                // A ← A·G, V ← V·G with G[:,p] = c e_p − s e^{-iα} e_q and
                // G[:,q] = s e_p + c e^{-iα} e_q.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * ph_conj * s;
                    a[(k, q)] = akp * s + akq * ph_conj * c;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * ph_conj * s;
                    v[(k, q)] = vkp * s + vkq * ph_conj * c;
                }
                // A ← G*·A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * phase * s;
                    a[(q, k)] = apk * s + aqk * phase * c;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
            }
        }
        off = off_diagonal_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|k| a[(k, k)].re).collect();
    // Stable sort keeps the column-index tie-break.
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values = order.iter().map(|&k| diag[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, c| v[(r, order[c])]);

    JacobiOutcome {
        values,
        vectors,
        sweeps,
        off,
        converged: off <= threshold,
    }
}

/// Diagonalizes a hermitian matrix by cyclic complex Jacobi rotations.
pub fn hermitian_eig(h: &HermitianMatrix) -> Result<HermitianEig> {
    hermitian_eig_with_sweeps(h, tol::MAX_SWEEPS)
}

pub fn hermitian_eig_with_sweeps(h: &HermitianMatrix, max_sweeps: usize) -> Result<HermitianEig> {
    let out = jacobi(h.as_matrix(), max_sweeps);
    if !out.converged {
        return Err(Error::NonConvergence {
            sweeps: out.sweeps,
            off: out.off,
        });
    }
    Ok(HermitianEig {
        values: out.values,
        vectors: UnitaryMatrix::new_unchecked(out.vectors),
    })
}

/// Largest singular value, `sqrt(λ_max(a*a))`.
pub fn op_norm(a: &ComplexMatrix) -> f64 {
    let gram = &a.adjoint() * a;
    let out = jacobi(&gram, tol::MAX_SWEEPS);
    out.values.first().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Largest absolute eigenvalue of a hermitian matrix, which is its operator
/// norm. Avoids the squaring in [`op_norm`].
pub(crate) fn hermitian_norm(h: &ComplexMatrix) -> f64 {
    let out = jacobi(h, tol::MAX_SWEEPS);
    out.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// Unit-circle eigenvalues and orthonormal eigenvectors of a unitary.
///
/// Eigenvalues are ordered by principal argument, descending.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<Complex64>,
    pub eigenvectors: UnitaryMatrix,
    pub subject: UnitaryMatrix,
}

impl SpectralDecomposition {
    /// Principal arguments in `(−π, π]`, in the stored (descending) order.
    pub fn args(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.arg()).collect()
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V·diag(λ)·V*`.
    pub fn recompose(&self) -> ComplexMatrix {
        let v = self.eigenvectors.as_matrix();
        let d = ComplexMatrix::from_diag(&self.eigenvalues);
        &(v * &d) * &v.adjoint()
    }

    /// `‖uV − V·diag(λ)‖_max`.
    pub fn residual(&self) -> f64 {
        let v = self.eigenvectors.as_matrix();
        let uv = self.subject.as_matrix() * v;
        let vd = v * &ComplexMatrix::from_diag(&self.eigenvalues);
        uv.max_diff(&vd)
    }

    /// Errors if some eigenvalue lies in the excluded band around −1.
    pub fn ensure_away_from_minus_one(&self) -> Result<()> {
        match self
            .args()
            .into_iter()
            .find(|a| a.abs() >= PI - tol::PI_GAP)
        {
            Some(arg) => Err(Error::SpectrumAtMinusOne { arg }),
            None => Ok(()),
        }
    }
}

const UNITARY_EIG_SEED: u64 = 0x756e_6973_7065_63;
const UNITARY_EIG_RETRIES: usize = 8;

/// [`unitary_eig_with`] driven by a fixed-seed generator.
pub fn unitary_eig(u: &UnitaryMatrix) -> Result<SpectralDecomposition> {
    let mut rng = ChaCha8Rng::seed_from_u64(UNITARY_EIG_SEED);
    unitary_eig_with(u, &mut rng)
}

/// Diagonalizes a unitary through the hermitian combination
/// `M = cos(s)·(u+u*)/2 + sin(s)·(−i)(u−u*)/2`, which commutes with `u`.
pub fn unitary_eig_with<R: Rng + ?Sized>(
    u: &UnitaryMatrix,
    rng: &mut R,
) -> Result<SpectralDecomposition> {
    let n = u.dim();
    let um = u.as_matrix();
    let uh = um.adjoint();
    let re_part = (um + &uh).scale_re(0.5);
    let im_part = (um - &uh).scale(-I * 0.5);
    let mut worst = f64::INFINITY;

    for _ in 0..=UNITARY_EIG_RETRIES {
        let s = rng.random_range(0.0..PI);
        let m = (&re_part.scale_re(s.cos()) + &im_part.scale_re(s.sin())).hermitian_part();
        let eig = hermitian_eig(&HermitianMatrix::new_unchecked(m))?;
        let v = eig.vectors.as_matrix();
        let d = &(&v.adjoint() * um) * v;

        let mut off = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    off = off.max(d[(r, c)].norm());
                }
            }
        }
        if off > tol::resid(n) {
            worst = worst.min(off);
            continue;
        }

        let raw: Vec<Complex64> = (0..n)
            .map(|k| {
                let z = d[(k, k)];
                if z.norm() == 0.0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    z / z.norm()
                }
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| raw[j].arg().total_cmp(&raw[i].arg()));
        let eigenvalues = order.iter().map(|&k| raw[k]).collect();
        let vectors = ComplexMatrix::from_fn(n, |r, c| v[(r, order[c])]);
        return Ok(SpectralDecomposition {
            eigenvalues,
            eigenvectors: UnitaryMatrix::new_unchecked(vectors),
            subject: u.clone(),
        });
    }
    Err(Error::DegenerateCombination {
        attempts: UNITARY_EIG_RETRIES + 1,
        off: worst,
    })
}
