//! Seeded instance generators, including planted equality cases.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, SkewHermitianMatrix, UnitaryMatrix, I, ZERO};
use crate::random::{haar_unitary_with, skew_with_spectrum_in, unitary_with_args_in};
use crate::spectral::Angle;
use crate::tol;

/// Seed for the deterministic generator behind every random instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

/// Gap kept between the planted top eigenvalue and the rest of the spectrum.
pub const EQUALITY_MARGIN: f64 = 0.05;

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > tol::MAX_DIM {
        return Err(Error::InvalidDimension(n));
    }
    Ok(())
}

pub fn haar_unitary(n: usize, seed: RngSeed) -> Result<UnitaryMatrix> {
    check_dim(n)?;
    Ok(haar_unitary_with(n, &mut seed.rng()))
}

pub fn random_bounded_unitary(n: usize, theta_cap: Angle, seed: RngSeed) -> Result<UnitaryMatrix> {
    random_bounded_unitary_with(n, theta_cap, &mut seed.rng())
}

/// `w·diag(e^{iθ_k})·w*` with Haar `w` and `θ_k` uniform in
/// `(−theta_cap, theta_cap)`.
pub fn random_bounded_unitary_with<R: Rng + ?Sized>(
    n: usize,
    theta_cap: Angle,
    rng: &mut R,
) -> Result<UnitaryMatrix> {
    check_dim(n)?;
    let cap = theta_cap.0;
    if !(cap > 0.0 && cap < PI) {
        return Err(Error::InvalidAngles(format!(
            "theta_cap {cap} must lie in (0, pi)"
        )));
    }
    Ok(unitary_with_args_in(n, -cap, cap, rng))
}

pub fn make_equality_pair(
    n: usize,
    k: usize,
    theta_a: Angle,
    theta_b: Angle,
    seed: RngSeed,
) -> Result<(UnitaryMatrix, UnitaryMatrix)> {
    make_equality_pair_with(n, k, theta_a, theta_b, &mut seed.rng())
}

/// Pair `u = w·diag(e^{iθa} I_k, A)·w*`, `v = w·diag(e^{iθb} I_k, B)·w*`
/// whose top eigenspaces share `w·span(e_1..e_k)`, so `θ₊(uv) = θa + θb`.
///
/// The arguments of `A` and `B` lie in `(−π/2 + margin, θ − margin)`.
pub fn make_equality_pair_with<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    theta_a: Angle,
    theta_b: Angle,
    rng: &mut R,
) -> Result<(UnitaryMatrix, UnitaryMatrix)> {
    check_dim(n)?;
    let (a, b) = (theta_a.0, theta_b.0);
    if k == 0 || k > n {
        return Err(Error::InvalidAngles(format!(
            "shared dimension k = {k} must lie in 1..={n}"
        )));
    }
    if !(a > 0.0 && b > 0.0 && a + b < PI) {
        return Err(Error::InvalidAngles(format!(
            "need theta_a, theta_b > 0 and theta_a + theta_b < pi, got {a}, {b}"
        )));
    }
    let w = haar_unitary_with(n, rng);
    let lower = -PI / 2.0 + EQUALITY_MARGIN;
    let mut block = |top: f64| -> UnitaryMatrix {
        let rest = (n > k).then(|| unitary_with_args_in(n - k, lower, top - EQUALITY_MARGIN, rng));
        let d = block_diag(
            &UnitaryMatrix::identity(k).phase_shift(top).into_matrix(),
            rest.as_ref().map(|r| r.as_matrix()),
        );
        UnitaryMatrix::reproject(w.as_matrix().conjugate(&d), 1)
    };
    let u = block(a);
    let v = block(b);
    Ok((u, v))
}

/// `diag(top, rest)`.
pub(crate) fn block_diag(top: &ComplexMatrix, rest: Option<&ComplexMatrix>) -> ComplexMatrix {
    let k = top.dim();
    let m = rest.map_or(0, |r| r.dim());
    ComplexMatrix::from_fn(k + m, |r, c| match (r < k, c < k) {
        (true, true) => top[(r, c)],
        (false, false) => rest.expect("rest block present")[(r - k, c - k)],
        _ => ZERO,
    })
}

/// `w·diag(i·top·I_k, rest)·w*`.
pub(crate) fn block_generator(
    w: &UnitaryMatrix,
    k: usize,
    top: f64,
    rest: Option<&SkewHermitianMatrix>,
) -> SkewHermitianMatrix {
    let head = ComplexMatrix::identity(k).scale(I * top);
    let d = block_diag(&head, rest.map(|r| r.as_matrix()));
    SkewHermitianMatrix::from_skew_part(&d).conjugate_by(w)
}

/// Skew-hermitian block of dimension `m` with spectrum of `−ix` in
/// `(lo, hi)`, or `None` when `m = 0`.
pub(crate) fn optional_block<R: Rng + ?Sized>(
    m: usize,
    lo: f64,
    hi: f64,
    rng: &mut R,
) -> Option<SkewHermitianMatrix> {
    (m > 0).then(|| skew_with_spectrum_in(m, lo, hi, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{subspace_distance, Subspace, UnitarySpectrum};

    #[test]
    fn haar_is_unitary_and_deterministic() {
        for n in [1, 2, 5, 16] {
            let u = haar_unitary(n, RngSeed(42)).unwrap();
            assert!(UnitaryMatrix::unitarity_residual(u.as_matrix()) <= 1e-10);
            assert_eq!(u, haar_unitary(n, RngSeed(42)).unwrap());
        }
        let s = haar_unitary(1, RngSeed(3)).unwrap();
        assert!((s.as_matrix()[(0, 0)].norm() - 1.0).abs() < 1e-15);
        assert!(haar_unitary(0, RngSeed(1)).is_err());
        assert!(haar_unitary(65, RngSeed(1)).is_err());
    }

    #[test]
    fn bounded_unitary_respects_cap() {
        for seed in 0..30 {
            let cap = 0.2 + 0.1 * seed as f64;
            let u = random_bounded_unitary(4, Angle(cap), RngSeed(seed)).unwrap();
            let s = UnitarySpectrum::new(&u).unwrap();
            assert!(s.theta_plus().0 < cap && s.theta_minus().0 > -cap);
        }
        let u = random_bounded_unitary(3, Angle(1e-6), RngSeed(9)).unwrap();
        assert!(u.as_matrix().max_diff(&ComplexMatrix::identity(3)) <= 2e-6);
        assert_eq!(
            random_bounded_unitary(3, Angle(1.0), RngSeed(5)).unwrap(),
            random_bounded_unitary(3, Angle(1.0), RngSeed(5)).unwrap()
        );
        assert!(random_bounded_unitary(3, Angle(PI), RngSeed(5)).is_err());
    }

    #[test]
    fn equality_pair_shapes() {
        let (u, v) = make_equality_pair(3, 3, Angle(0.4), Angle(0.9), RngSeed(1)).unwrap();
        assert!(u.as_matrix().max_diff(&UnitaryMatrix::identity(3).phase_shift(0.4).into_matrix()) < 1e-12);
        assert!(v.as_matrix().max_diff(&UnitaryMatrix::identity(3).phase_shift(0.9).into_matrix()) < 1e-12);

        let (u, v) = make_equality_pair(4, 2, Angle(0.7), Angle(1.1), RngSeed(2)).unwrap();
        let su = UnitarySpectrum::new(&u).unwrap();
        let sv = UnitarySpectrum::new(&v).unwrap();
        assert!((su.theta_plus().0 - 0.7).abs() < 1e-12);
        assert!((sv.theta_plus().0 - 1.1).abs() < 1e-12);
        assert_eq!(su.eigenspace_plus().dim(), 2);
        let shared = subspace_distance(&su.eigenspace_plus(), &sv.eigenspace_plus()).unwrap();
        assert!(shared < 1e-10);
        let prod = UnitarySpectrum::new(&u.mul(&v)).unwrap();
        assert!((prod.theta_plus().0 - 1.8).abs() < 1e-12);
        assert_eq!(prod.eigenspace_plus().dim(), 2);
        assert_ne!(su.eigenspace_plus(), Subspace::zero(4));

        assert!(matches!(
            make_equality_pair(4, 1, Angle(2.0), Angle(1.2), RngSeed(0)),
            Err(Error::InvalidAngles(_))
        ));
        assert!(make_equality_pair(4, 0, Angle(0.2), Angle(0.2), RngSeed(0)).is_err());
        assert!(make_equality_pair(4, 1, Angle(-0.2), Angle(0.2), RngSeed(0)).is_err());
    }
}
