//! Random instance generation. Every function draws from an explicitly
//! passed generator so callers control reproducibility.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{
    inner, vec_norm, ComplexMatrix, HermitianMatrix, SkewHermitianMatrix, UnitaryMatrix,
};

/// Standard complex gaussian, `E|z|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| complex_gaussian(rng))
}

/// GUE-like sample: hermitian part of a complex gaussian matrix.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianMatrix {
    HermitianMatrix::from_hermitian_part(&gaussian_matrix(n, rng))
}

pub fn random_skew<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SkewHermitianMatrix {
    random_hermitian(n, rng).to_skew()
}

pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        let norm = vec_norm(&v);
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-distributed unitary: QR of a complex gaussian matrix with the phases
/// of `R`'s diagonal absorbed into `Q`.
pub fn haar_unitary_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> UnitaryMatrix {
    let g = gaussian_matrix(n, rng);
    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut r_diag = Vec::with_capacity(n);
    for c in 0..n {
        let mut v = g.column(c);
        // Two passes of Gram–Schmidt keep Q orthonormal to rounding.
        for _ in 0..2 {
            for qk in &q {
                let proj = inner(&v, qk);
                for (vi, qi) in v.iter_mut().zip(qk) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = vec_norm(&v);
        let rkk = inner(&g.column(c), &v) / norm;
        r_diag.push(rkk);
        q.push(v.into_iter().map(|z| z / norm).collect());
    }
    for (col, rkk) in q.iter_mut().zip(&r_diag) {
        let phase = rkk / rkk.norm();
        for z in col.iter_mut() {
            *z *= phase;
        }
    }
    UnitaryMatrix::reproject(ComplexMatrix::from_columns(&q), 1)
}

/// `w·diag(e^{iθ_k})·w*` with Haar `w` and `θ_k` uniform in `(lo, hi)`.
pub fn unitary_with_args_in<R: Rng + ?Sized>(
    n: usize,
    lo: f64,
    hi: f64,
    rng: &mut R,
) -> UnitaryMatrix {
    debug_assert!(-PI < lo && lo < hi && hi < PI);
    let w = haar_unitary_with(n, rng);
    let args: Vec<f64> = (0..n).map(|_| rng.random_range(lo..hi)).collect();
    let d = UnitaryMatrix::from_phases(&args);
    UnitaryMatrix::reproject(w.as_matrix().conjugate(d.as_matrix()), 1)
}

/// Skew-hermitian `w·i·diag(λ_k)·w*` with `λ_k` uniform in `(lo, hi)`.
pub fn skew_with_spectrum_in<R: Rng + ?Sized>(
    n: usize,
    lo: f64,
    hi: f64,
    rng: &mut R,
) -> SkewHermitianMatrix {
    let w = haar_unitary_with(n, rng);
    let vals: Vec<f64> = (0..n).map(|_| rng.random_range(lo..hi)).collect();
    SkewHermitianMatrix::from_imag_diag(&vals).conjugate_by(&w)
}
