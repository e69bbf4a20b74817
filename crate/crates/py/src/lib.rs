//! Python bindings: unitary and skew-hermitian matrices, spectral angles,
//! distances, the bound checkers and the seeded suite.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use unispec::linalg::{expm_skew, logm_principal, ComplexMatrix, SkewHermitianMatrix, UnitaryMatrix};
use unispec::spectral::{self, Angle, GeneratorSpectrum, UnitarySpectrum};
use unispec::theorems::{self, CheckKind, RngSeed, SuiteConfig};

create_exception!(pyunispec, UnispecError, PyValueError);

fn err(e: unispec::Error) -> PyErr {
    UnispecError::new_err(e.to_string())
}

fn to_rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    m.rows()
}

fn from_rows(rows: Vec<Vec<Complex64>>) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(rows).map_err(err)
}

fn json_to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| UnispecError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A unitary matrix, validated on construction.
#[pyclass(frozen, from_py_object, module = "pyunispec")]
#[derive(Clone)]
pub struct Unitary(UnitaryMatrix);

#[pymethods]
impl Unitary {
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        UnitaryMatrix::new(from_rows(rows)?).map(Self).map_err(err)
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        Self(UnitaryMatrix::identity(n))
    }

    #[staticmethod]
    fn from_phases(phases: Vec<f64>) -> Self {
        Self(UnitaryMatrix::from_phases(&phases))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        unispec::io::unitary_from_json(text).map(Self).map_err(err)
    }

    fn to_json(&self) -> String {
        unispec::io::matrix_to_json(self.0.as_matrix())
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn to_list(&self) -> Vec<Vec<Complex64>> {
        to_rows(self.0.as_matrix())
    }

    fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    fn theta_plus(&self) -> PyResult<f64> {
        spectral::theta_plus(&self.0).map(|a| a.0).map_err(err)
    }

    fn theta_minus(&self) -> PyResult<f64> {
        spectral::theta_minus(&self.0).map(|a| a.0).map_err(err)
    }

    /// Eigenvalue arguments in descending order.
    fn args(&self) -> PyResult<Vec<f64>> {
        UnitarySpectrum::new(&self.0).map(|s| s.args().to_vec()).map_err(err)
    }

    fn log(&self) -> PyResult<Generator> {
        logm_principal(&self.0).map(Generator).map_err(err)
    }

    fn __matmul__(&self, other: &Unitary) -> PyResult<Self> {
        if self.0.dim() != other.0.dim() {
            return Err(err(unispec::Error::DimensionMismatch {
                expected: self.0.dim(),
                found: other.0.dim(),
            }));
        }
        Ok(Self(self.0.mul(&other.0)))
    }

    fn __repr__(&self) -> String {
        format!("Unitary(dim={})", self.0.dim())
    }
}

/// A skew-hermitian generator `x` with `x* = −x`.
#[pyclass(frozen, from_py_object, module = "pyunispec")]
#[derive(Clone)]
pub struct Generator(SkewHermitianMatrix);

#[pymethods]
impl Generator {
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        SkewHermitianMatrix::new(from_rows(rows)?).map(Self).map_err(err)
    }

    /// `diag(i·values)`.
    #[staticmethod]
    fn from_imag_diag(values: Vec<f64>) -> Self {
        Self(SkewHermitianMatrix::from_imag_diag(&values))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn to_list(&self) -> Vec<Vec<Complex64>> {
        to_rows(self.0.as_matrix())
    }

    fn phi_plus(&self) -> f64 {
        spectral::phi_plus(&self.0).0
    }

    fn phi_minus(&self) -> f64 {
        spectral::phi_minus(&self.0).0
    }

    fn norm(&self) -> PyResult<f64> {
        GeneratorSpectrum::new(&self.0).map(|s| s.norm()).map_err(err)
    }

    fn expm(&self) -> PyResult<Unitary> {
        expm_skew(&self.0).map(Unitary).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Generator(dim={})", self.0.dim())
    }
}

#[pyfunction]
fn haar_unitary(n: usize, seed: u64) -> PyResult<Unitary> {
    theorems::haar_unitary(n, RngSeed(seed)).map(Unitary).map_err(err)
}

#[pyfunction]
fn random_bounded_unitary(n: usize, theta_cap: f64, seed: u64) -> PyResult<Unitary> {
    theorems::random_bounded_unitary(n, Angle(theta_cap), RngSeed(seed))
        .map(Unitary)
        .map_err(err)
}

#[pyfunction]
fn make_equality_pair(n: usize, k: usize, theta_a: f64, theta_b: f64, seed: u64) -> PyResult<(Unitary, Unitary)> {
    theorems::make_equality_pair(n, k, Angle(theta_a), Angle(theta_b), RngSeed(seed))
        .map(|(u, v)| (Unitary(u), Unitary(v)))
        .map_err(err)
}

#[pyfunction]
fn theta_plus(u: &Unitary) -> PyResult<f64> {
    u.theta_plus()
}

#[pyfunction]
fn theta_minus(u: &Unitary) -> PyResult<f64> {
    u.theta_minus()
}

/// `dist(u, v)`, or the distance to the identity when `v` is omitted.
#[pyfunction]
#[pyo3(signature = (u, v = None))]
fn dist(u: &Unitary, v: Option<&Unitary>) -> PyResult<f64> {
    match v {
        Some(v) => spectral::dist(&u.0, &v.0),
        None => spectral::dist_identity(&u.0),
    }
    .map_err(err)
}

#[pyfunction]
fn expm(x: &Generator) -> PyResult<Unitary> {
    x.expm()
}

#[pyfunction]
fn logm(u: &Unitary) -> PyResult<Generator> {
    u.log()
}

#[pyfunction]
fn check_product_bound<'py>(py: Python<'py>, u: &Unitary, v: &Unitary) -> PyResult<Bound<'py, PyAny>> {
    let report = theorems::check_product_bound(&u.0, &v.0).map_err(err)?;
    json_to_py(py, &report)
}

#[pyfunction]
fn check_nfold_bound<'py>(py: Python<'py>, factors: Vec<Unitary>) -> PyResult<Bound<'py, PyAny>> {
    let us: Vec<UnitaryMatrix> = factors.into_iter().map(|u| u.0).collect();
    let report = theorems::check_nfold_bound(&us).map_err(err)?;
    json_to_py(py, &report)
}

/// Runs the seeded suite and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (seed = 0, trials = 100, dims = vec![4], checks = None, jobs = None))]
fn run_suite<'py>(
    py: Python<'py>,
    seed: u64,
    trials: usize,
    dims: Vec<usize>,
    checks: Option<Vec<String>>,
    jobs: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let checks = match checks {
        Some(names) => names
            .iter()
            .map(|s| s.parse::<CheckKind>())
            .collect::<unispec::Result<Vec<_>>>()
            .map_err(err)?,
        None => CheckKind::ALL.to_vec(),
    };
    if let Some(&bad) = dims.iter().find(|&&n| n == 0 || n > unispec::tol::MAX_DIM) {
        return Err(err(unispec::Error::InvalidDimension(bad)));
    }
    let config = SuiteConfig {
        seed,
        trials,
        dims,
        checks,
        jobs,
    };
    let report = py.detach(|| theorems::run_suite(&config));
    json_to_py(py, &report)
}

#[pymodule]
fn pyunispec(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("UnispecError", m.py().get_type::<UnispecError>())?;
    m.add_class::<Unitary>()?;
    m.add_class::<Generator>()?;
    m.add_function(wrap_pyfunction!(haar_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(random_bounded_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(make_equality_pair, m)?)?;
    m.add_function(wrap_pyfunction!(theta_plus, m)?)?;
    m.add_function(wrap_pyfunction!(theta_minus, m)?)?;
    m.add_function(wrap_pyfunction!(dist, m)?)?;
    m.add_function(wrap_pyfunction!(expm, m)?)?;
    m.add_function(wrap_pyfunction!(logm, m)?)?;
    m.add_function(wrap_pyfunction!(check_product_bound, m)?)?;
    m.add_function(wrap_pyfunction!(check_nfold_bound, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
