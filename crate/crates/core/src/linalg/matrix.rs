use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![ONE; n])
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = d;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                data.push(f(r, c));
            }
        }
        Self { n, data }
    }

    /// Builds a matrix from rows, rejecting ragged or non-finite input.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || n > tol::MAX_DIM {
            return Err(Error::InvalidDimension(n));
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        let m = Self { n, data };
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Complex64>]) -> Self {
        let n = cols.len();
        Self::from_fn(n, |r, c| cols[c][r])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.n).map(|r| self[(r, c)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.n, "vector length must match matrix dimension");
        self.data
            .chunks(self.n)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|k| self[(k, k)]).sum()
    }

    /// `‖self − other‖_max`.
    pub fn max_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Hermitian part `(a + a*)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.n, |r, c| (self[(r, c)] + self[(c, r)].conj()) * 0.5)
    }

    /// Skew-hermitian part `(a − a*)/2`.
    pub fn skew_part(&self) -> Self {
        Self::from_fn(self.n, |r, c| (self[(r, c)] - self[(c, r)].conj()) * 0.5)
    }

    /// Conjugation `self · a · self*`.
    pub fn conjugate(&self, a: &Self) -> Self {
        &(self * a) * &self.adjoint()
    }

    pub(crate) fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.n + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.n + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "matrix dimensions must agree");
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[r * n..(r + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "matrix dimensions must agree");
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "matrix dimensions must agree");
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.n, self.n)?;
        for row in self.data.chunks(self.n) {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

macro_rules! validated_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq)]
        pub struct $name(ComplexMatrix);

        impl $name {
            pub fn as_matrix(&self) -> &ComplexMatrix {
                &self.0
            }

            pub fn into_matrix(self) -> ComplexMatrix {
                self.0
            }

            pub fn dim(&self) -> usize {
                self.0.dim()
            }

            /// Wraps a matrix already known to satisfy the invariant.
            pub(crate) fn new_unchecked(m: ComplexMatrix) -> Self {
                Self(m)
            }
        }

        impl AsRef<ComplexMatrix> for $name {
            fn as_ref(&self) -> &ComplexMatrix {
                &self.0
            }
        }
    };
}

validated_newtype!(
    /// Matrix with `‖h − h*‖_max ≤ tol_sym`.
    HermitianMatrix
);
validated_newtype!(
    /// Lie-algebra element: `‖x + x*‖_max ≤ tol_sym`.
    SkewHermitianMatrix
);
validated_newtype!(
    /// Group element: `‖u*u − I‖_max ≤ tol_unitary`.
    UnitaryMatrix
);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let residual = m.max_diff(&m.adjoint());
        let tol = tol::sym(m.dim());
        if residual > tol {
            return Err(Error::NotHermitian { residual, tol });
        }
        Ok(Self(m))
    }

    /// Symmetrizes `m` before wrapping it.
    pub fn from_hermitian_part(m: &ComplexMatrix) -> Self {
        Self(m.hermitian_part())
    }

    /// `i·h`, the corresponding Lie-algebra element.
    pub fn to_skew(&self) -> SkewHermitianMatrix {
        SkewHermitianMatrix(self.0.scale(I))
    }
}

impl SkewHermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let residual = (&m + &m.adjoint()).max_abs();
        let tol = tol::sym(m.dim());
        if residual > tol {
            return Err(Error::NotSkewHermitian { residual, tol });
        }
        Ok(Self(m))
    }

    pub fn zeros(n: usize) -> Self {
        Self(ComplexMatrix::zeros(n))
    }

    pub fn from_skew_part(m: &ComplexMatrix) -> Self {
        Self(m.skew_part())
    }

    /// `i·diag(values)`.
    pub fn from_imag_diag(values: &[f64]) -> Self {
        let d: Vec<Complex64> = values.iter().map(|&v| Complex64::new(0.0, v)).collect();
        Self(ComplexMatrix::from_diag(&d))
    }

    /// The hermitian matrix `−i·x`.
    pub fn to_hermitian(&self) -> HermitianMatrix {
        HermitianMatrix(self.0.scale(-I).hermitian_part())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale_re(s))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    /// `w·x·w*`, which stays skew-hermitian for unitary `w`.
    pub fn conjugate_by(&self, w: &UnitaryMatrix) -> Self {
        Self(w.0.conjugate(&self.0).skew_part())
    }
}

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let residual = Self::unitarity_residual(&m);
        let tol = tol::unitary(m.dim());
        if residual > tol {
            return Err(Error::NotUnitary { residual, tol });
        }
        Ok(Self(m))
    }

    /// `‖m*m − I‖_max`.
    pub fn unitarity_residual(m: &ComplexMatrix) -> f64 {
        (&m.adjoint() * m).max_diff(&ComplexMatrix::identity(m.dim()))
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    /// `diag(e^{i·a_k})`.
    pub fn from_phases(args: &[f64]) -> Self {
        let d: Vec<Complex64> = args.iter().map(|&a| Complex64::from_polar(1.0, a)).collect();
        Self(ComplexMatrix::from_diag(&d))
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// Group product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    /// `e^{iλ}·self`.
    pub fn phase_shift(&self, lambda: f64) -> Self {
        Self(self.0.scale(Complex64::from_polar(1.0, lambda)))
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.0.mul_vec(v)
    }

    /// Pulls a matrix close to the group back onto it with Newton–Schulz
    /// polar iterations `u ← u(3I − u*u)/2`.
    pub fn reproject(m: ComplexMatrix, iterations: usize) -> Self {
        let n = m.dim();
        let three = ComplexMatrix::identity(n).scale_re(3.0);
        let mut u = m;
        for _ in 0..iterations {
            let gram = &u.adjoint() * &u;
            u = (&u * &(&three - &gram)).scale_re(0.5);
        }
        Self(u)
    }
}

/// `⟨a, b⟩ = Σ a_k · conj(b_k)`, linear in the first slot.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
