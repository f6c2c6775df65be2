//! Python bindings for `strongctl`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;

use strongctl::analysis::{self, Direction, Query, TimeDomain, Variation};
use strongctl::conditions::{self, Condition, Verdict};
use strongctl::numeric::{self, Matrix, Sampling, Window};
use strongctl::pattern::{self, Pattern};

fn value_error(e: strongctl::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(
    name = "Pattern",
    module = "pystrongctl",
    frozen,
    eq,
    skip_from_py_object
)]
#[derive(Clone, PartialEq)]
struct PyPattern {
    inner: Pattern,
}

#[pymethods]
impl PyPattern {
    /// Parses the text format: rows of `*` (nonzero) and `o`, `0` or `.` (zero).
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        pattern::parse_pattern(text)
            .map(|inner| PyPattern { inner })
            .map_err(value_error)
    }

    /// Pattern from a list of rows of booleans.
    #[staticmethod]
    fn from_rows(rows: Vec<Vec<bool>>) -> PyResult<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(PyValueError::new_err("rows differ in length"));
        }
        let n = rows.len();
        Pattern::from_mask(n, cols, rows.into_iter().flatten().collect())
            .map(|inner| PyPattern { inner })
            .map_err(value_error)
    }

    #[getter]
    fn rows(&self) -> usize {
        self.inner.rows()
    }

    #[getter]
    fn cols(&self) -> usize {
        self.inner.cols()
    }

    /// Zero-based `(row, col)` positions of the nonzeros.
    fn nonzeros(&self) -> Vec<(usize, usize)> {
        self.inner.nonzeros()
    }

    fn transpose(&self) -> Self {
        PyPattern {
            inner: self.inner.transpose(),
        }
    }

    fn with_identity(&self) -> PyResult<Self> {
        self.inner
            .with_identity()
            .map(|inner| PyPattern { inner })
            .map_err(value_error)
    }

    fn __str__(&self) -> String {
        self.inner.render()
    }

    fn __repr__(&self) -> String {
        format!("Pattern({:?})", self.inner.render())
    }
}

fn parse_condition(name: &str) -> PyResult<Condition> {
    Condition::ALL
        .into_iter()
        .find(|c| c.name().eq_ignore_ascii_case(name))
        .ok_or_else(|| PyValueError::new_err(format!("unknown condition `{name}`")))
}

fn verdict_to_py<'py>(py: Python<'py>, v: &Verdict) -> PyResult<Bound<'py, PyAny>> {
    json_to_py(py, &serde_json::to_string(v).expect("verdicts serialize"))
}

/// Checks one of `"G1"`, `"G2"`, `"G3"` (needs `horizon`) or `"G4"` and
/// returns the verdict as a dict.
#[pyfunction]
#[pyo3(signature = (condition, a, b, horizon = None))]
fn check<'py>(
    py: Python<'py>,
    condition: &str,
    a: &PyPattern,
    b: &PyPattern,
    horizon: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let cond = parse_condition(condition)?;
    let v = conditions::check(cond, &a.inner, &b.inner, horizon).map_err(value_error)?;
    verdict_to_py(py, &v)
}

/// Exhaustive counterpart of `check`, for small patterns.
#[pyfunction]
#[pyo3(signature = (condition, a, b, horizon = None))]
fn brute_check<'py>(
    py: Python<'py>,
    condition: &str,
    a: &PyPattern,
    b: &PyPattern,
    horizon: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let cond = parse_condition(condition)?;
    let v = conditions::brute_check(cond, &a.inner, &b.inner, horizon).map_err(value_error)?;
    verdict_to_py(py, &v)
}

/// Whether the 1-based vertex set `vertices` violates `condition`.
#[pyfunction]
#[pyo3(signature = (condition, a, b, vertices, horizon = None))]
fn violates(
    condition: &str,
    a: &PyPattern,
    b: &PyPattern,
    vertices: Vec<usize>,
    horizon: Option<usize>,
) -> PyResult<bool> {
    let cond = parse_condition(condition)?;
    conditions::violates(
        cond,
        &a.inner,
        &b.inner,
        horizon,
        &vertices.into_iter().collect(),
    )
    .map_err(value_error)
}

/// Full analysis report as a dict. `second` is the input pattern for
/// controllability and the output pattern for observability.
#[pyfunction]
#[pyo3(signature = (a, second, domain, variation, direction, horizon = None, trace = false))]
#[allow(clippy::too_many_arguments)]
fn analyze<'py>(
    py: Python<'py>,
    a: &PyPattern,
    second: &PyPattern,
    domain: &str,
    variation: &str,
    direction: &str,
    horizon: Option<usize>,
    trace: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let domain = match domain {
        "discrete" => TimeDomain::Discrete,
        "continuous" => TimeDomain::Continuous,
        other => return Err(PyValueError::new_err(format!("unknown domain `{other}`"))),
    };
    let variation = match variation {
        "lti" | "time-invariant" => Variation::TimeInvariant,
        "tv" | "time-varying" => Variation::TimeVarying,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown variation `{other}`"
            )))
        }
    };
    let direction = match direction {
        "controllability" => Direction::Controllability,
        "observability" => Direction::Observability,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown direction `{other}`"
            )))
        }
    };
    let q = Query::new(domain, variation, direction, horizon).map_err(value_error)?;
    let report = analysis::analyze(&a.inner, &second.inner, &q, trace).map_err(value_error)?;
    json_to_py(py, &report.to_json())
}

fn matrix_from_rows(rows: Vec<Vec<f64>>) -> PyResult<Matrix> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(PyValueError::new_err("rows differ in length"));
    }
    let n = rows.len();
    Ok(Matrix::from_vec(
        n,
        cols,
        rows.into_iter().flatten().collect(),
    ))
}

fn matrix_to_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// Rank by pivoted row reduction, relative to the largest entry.
#[pyfunction]
#[pyo3(signature = (rows, rel_tol = numeric::DEFAULT_RANK_TOL))]
fn numeric_rank(rows: Vec<Vec<f64>>, rel_tol: f64) -> PyResult<usize> {
    Ok(numeric::numeric_rank(&matrix_from_rows(rows)?, rel_tol))
}

#[pyfunction]
fn matrix_exponential(rows: Vec<Vec<f64>>, scale: f64) -> PyResult<Vec<Vec<f64>>> {
    let m = matrix_from_rows(rows)?;
    if !m.is_square() {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    Ok(matrix_to_rows(&numeric::matrix_exponential(&m, scale)))
}

/// Reachability matrix over `[0, horizon]` of a seeded random system of the
/// pattern pair.
#[pyfunction]
#[pyo3(signature = (a, b, horizon, seed, per_step = false))]
fn sampled_reachability_matrix(
    a: &PyPattern,
    b: &PyPattern,
    horizon: usize,
    seed: u64,
    per_step: bool,
) -> PyResult<Vec<Vec<f64>>> {
    if horizon == 0 {
        return Err(PyValueError::new_err("horizon must be at least 1"));
    }
    let sampling = if per_step {
        Sampling::PerStep
    } else {
        Sampling::Constant
    };
    let inst = numeric::sample_instantiation(
        &a.inner,
        &b.inner,
        Window::of_len(0, horizon),
        sampling,
        seed,
    )
    .map_err(value_error)?;
    let m = numeric::reachability_matrix_dt(&inst, 0, horizon as i64).map_err(value_error)?;
    Ok(matrix_to_rows(&m))
}

/// Runs the self-test and returns `(criterion, passed, detail)` triples.
#[pyfunction]
#[pyo3(signature = (seed = strongctl::selftest::DEFAULT_SEED))]
fn selftest(seed: u64) -> Vec<(usize, bool, String)> {
    strongctl::selftest::run_all(seed)
        .into_iter()
        .map(|o| (o.criterion, o.passed, o.detail))
        .collect()
}

#[pymodule]
fn pystrongctl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPattern>()?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(brute_check, m)?)?;
    m.add_function(wrap_pyfunction!(violates, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(numeric_rank, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_exponential, m)?)?;
    m.add_function(wrap_pyfunction!(sampled_reachability_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}
