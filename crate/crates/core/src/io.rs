//! JSON file formats for matrices, curves and subspaces.
//!
//! Matrices are `{"n", "re", "im"}` with row-major nested arrays. Curves are
//! `{"segments": [{"duration", "constant" | "samples"}]}`. Subspaces are
//! `{"n", "k", "basis_re", "basis_im"}` holding `k` columns of length `n`.
//! Serializing then parsing reproduces every value bit for bit.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{GeneratorCurve, Segment, SegmentKind};
use crate::linalg::{ComplexMatrix, SkewHermitianMatrix, UnitaryMatrix};
use crate::spectral::Subspace;
use crate::tol;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let part = |f: fn(&Complex64) -> f64| {
            (0..n)
                .map(|r| (0..n).map(|c| f(&m[(r, c)])).collect())
                .collect()
        };
        Self {
            n,
            re: part(|z| z.re),
            im: part(|z| z.im),
        }
    }

    /// Checks the shape and builds the matrix.
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.n;
        if n == 0 || n > tol::MAX_DIM {
            return Err(Error::InvalidDimension(n));
        }
        check_square("re", &self.re, n)?;
        check_square("im", &self.im, n)?;
        let rows = self
            .re
            .iter()
            .zip(&self.im)
            .map(|(re, im)| re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect())
            .collect();
        ComplexMatrix::from_rows(rows)
    }
}

fn check_square(name: &str, rows: &[Vec<f64>], n: usize) -> Result<()> {
    if rows.len() != n {
        return Err(Error::Parse(format!(
            "'{name}' has {} rows, expected n = {n}",
            rows.len()
        )));
    }
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Parse(format!(
            "'{name}' row {i} has {} entries, expected n = {n}",
            row.len()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentJson {
    pub duration: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<MatrixJson>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveJson {
    pub segments: Vec<SegmentJson>,
}

impl CurveJson {
    pub fn from_curve(curve: &GeneratorCurve) -> Self {
        let segments = curve
            .segments()
            .iter()
            .map(|s| match &s.kind {
                SegmentKind::Constant(x) => SegmentJson {
                    duration: s.duration,
                    constant: Some(MatrixJson::from_matrix(x.as_matrix())),
                    samples: None,
                },
                SegmentKind::Sampled(xs) => SegmentJson {
                    duration: s.duration,
                    constant: None,
                    samples: Some(xs.iter().map(|x| MatrixJson::from_matrix(x.as_matrix())).collect()),
                },
            })
            .collect();
        Self { segments }
    }

    /// Validates every generator as skew-hermitian and builds the curve.
    pub fn to_curve(&self) -> Result<GeneratorCurve> {
        let skew = |m: &MatrixJson| SkewHermitianMatrix::new(m.to_matrix()?);
        let segments = self
            .segments
            .iter()
            .enumerate()
            .map(|(i, s)| match (&s.constant, &s.samples) {
                (Some(x), None) => Ok(Segment::constant(s.duration, skew(x)?)),
                (None, Some(xs)) => Ok(Segment::sampled(
                    s.duration,
                    xs.iter().map(skew).collect::<Result<_>>()?,
                )),
                _ => Err(Error::Parse(format!(
                    "segment {i} needs exactly one of 'constant' or 'samples'"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        GeneratorCurve::new(segments)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceJson {
    pub n: usize,
    pub k: usize,
    pub basis_re: Vec<Vec<f64>>,
    pub basis_im: Vec<Vec<f64>>,
}

impl SubspaceJson {
    pub fn from_subspace(s: &Subspace) -> Self {
        let part = |f: fn(&Complex64) -> f64| {
            s.basis()
                .iter()
                .map(|col| col.iter().map(f).collect())
                .collect()
        };
        Self {
            n: s.ambient_dim(),
            k: s.dim(),
            basis_re: part(|z| z.re),
            basis_im: part(|z| z.im),
        }
    }

    /// Checks the shape and orthonormality of the stored basis.
    pub fn to_subspace(&self) -> Result<Subspace> {
        let (n, k) = (self.n, self.k);
        if n == 0 || n > tol::MAX_DIM {
            return Err(Error::InvalidDimension(n));
        }
        for (name, cols) in [("basis_re", &self.basis_re), ("basis_im", &self.basis_im)] {
            if cols.len() != k || cols.iter().any(|c| c.len() != n) {
                return Err(Error::Parse(format!(
                    "'{name}' must hold k = {k} columns of length n = {n}"
                )));
            }
        }
        let basis = self
            .basis_re
            .iter()
            .zip(&self.basis_im)
            .map(|(re, im)| re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect())
            .collect();
        Subspace::from_orthonormal(n, basis)
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn decode<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    decode::<MatrixJson>(text)?.to_matrix()
}

pub fn unitary_from_json(text: &str) -> Result<UnitaryMatrix> {
    UnitaryMatrix::new(matrix_from_json(text)?)
}

pub fn skew_from_json(text: &str) -> Result<SkewHermitianMatrix> {
    SkewHermitianMatrix::new(matrix_from_json(text)?)
}

pub fn curve_from_json(text: &str) -> Result<GeneratorCurve> {
    decode::<CurveJson>(text)?.to_curve()
}

pub fn subspace_from_json(text: &str) -> Result<Subspace> {
    decode::<SubspaceJson>(text)?.to_subspace()
}

pub fn parse_matrix(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    matrix_from_json(&read(path.as_ref())?)
}

pub fn parse_unitary(path: impl AsRef<Path>) -> Result<UnitaryMatrix> {
    unitary_from_json(&read(path.as_ref())?)
}

pub fn parse_skew(path: impl AsRef<Path>) -> Result<SkewHermitianMatrix> {
    skew_from_json(&read(path.as_ref())?)
}

pub fn parse_curve(path: impl AsRef<Path>) -> Result<GeneratorCurve> {
    curve_from_json(&read(path.as_ref())?)
}

pub fn parse_subspace(path: impl AsRef<Path>) -> Result<Subspace> {
    subspace_from_json(&read(path.as_ref())?)
}

fn encode<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    encode(&MatrixJson::from_matrix(m))
}

pub fn curve_to_json(curve: &GeneratorCurve) -> String {
    encode(&CurveJson::from_curve(curve))
}

pub fn subspace_to_json(s: &Subspace) -> String {
    encode(&SubspaceJson::from_subspace(s))
}

pub fn write_matrix(path: impl AsRef<Path>, m: &ComplexMatrix) -> Result<()> {
    write(path.as_ref(), &matrix_to_json(m))
}

pub fn write_curve(path: impl AsRef<Path>, curve: &GeneratorCurve) -> Result<()> {
    write(path.as_ref(), &curve_to_json(curve))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)
        .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
}
