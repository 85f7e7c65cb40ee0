//! Python module `owl_norm`: weights, norm, dual norm, prox and the
//! least-squares solver from `owl-core`.
//!
//! Vectors cross the boundary as lists of floats (any float sequence is
//! accepted, numpy arrays included). Errors surface as `ValueError`.

use ndarray::{Array1, Array2};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use owl_core::norm::unit_ball_vertices_2d;
use owl_core::solver::{solve as core_solve, Algorithm, Problem, SolverConfig, StepMode};
use owl_core::WeightVector;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Validated non-increasing, non-negative weight vector with a positive first entry.
#[pyclass(name = "Weights", frozen)]
struct PyWeights {
    inner: WeightVector,
}

#[pymethods]
impl PyWeights {
    #[new]
    fn new(values: Vec<f64>) -> PyResult<Self> {
        WeightVector::new(values)
            .map(|inner| Self { inner })
            .map_err(value_error)
    }

    /// `w_i = λ1 + λ2 (n − i)` for 1-based `i`.
    #[staticmethod]
    fn oscar(n: usize, lambda1: f64, lambda2: f64) -> PyResult<Self> {
        WeightVector::oscar(n, lambda1, lambda2)
            .map(|inner| Self { inner })
            .map_err(value_error)
    }

    #[staticmethod]
    fn l1(n: usize, lam: f64) -> PyResult<Self> {
        WeightVector::l1(n, lam)
            .map(|inner| Self { inner })
            .map_err(value_error)
    }

    #[staticmethod]
    fn linf(n: usize, t1: f64) -> PyResult<Self> {
        WeightVector::linf(n, t1)
            .map(|inner| Self { inner })
            .map_err(value_error)
    }

    fn values(&self) -> Vec<f64> {
        self.inner.as_slice().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Weights({:?})", self.inner.as_slice())
    }
}

#[pyfunction]
fn norm(x: Vec<f64>, w: &PyWeights) -> PyResult<f64> {
    owl_core::evaluate(&x, &w.inner).map_err(value_error)
}

#[pyfunction]
fn dual_norm(x: Vec<f64>, w: &PyWeights) -> PyResult<f64> {
    owl_core::dual_norm(&x, &w.inner).map_err(value_error)
}

#[pyfunction]
fn prox(v: Vec<f64>, w: &PyWeights) -> PyResult<Vec<f64>> {
    owl_core::prox(&v, &w.inner).map_err(value_error)
}

/// Pools a non-increasing magnitude vector. Returns `(vbar, wbar, sizes)`.
#[pyfunction]
fn group_and_average(v: Vec<f64>, w: &PyWeights) -> PyResult<(Vec<f64>, Vec<f64>, Vec<usize>)> {
    let g = owl_core::group_and_average(&v, &w.inner).map_err(value_error)?;
    let sizes = g.partition.sizes();
    Ok((g.vbar, g.wbar, sizes))
}

/// Vertices of the 2-D unit ball in counter-clockwise order.
#[pyfunction]
fn ball(w: &PyWeights) -> PyResult<Vec<(f64, f64)>> {
    let b = unit_ball_vertices_2d(&w.inner).map_err(value_error)?;
    Ok(b.vertices.into_iter().map(|[x, y]| (x, y)).collect())
}

/// Minimizes `½‖y − Ax‖² + Ω(x)`; `a` is a list of rows.
#[pyfunction]
#[pyo3(signature = (a, y, w, algorithm = "fista", tol = 1e-8, max_iter = 10_000, step = "fixed"))]
#[allow(clippy::too_many_arguments)]
fn solve<'py>(
    py: Python<'py>,
    a: Vec<Vec<f64>>,
    y: Vec<f64>,
    w: &PyWeights,
    algorithm: &str,
    tol: f64,
    max_iter: usize,
    step: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    if a.iter().any(|r| r.len() != cols) {
        return Err(PyValueError::new_err("rows of a have different lengths"));
    }
    let flat: Vec<f64> = a.into_iter().flatten().collect();
    let matrix = Array2::from_shape_vec((rows, cols), flat).map_err(value_error)?;
    let config = SolverConfig {
        algorithm: match algorithm {
            "fista" => Algorithm::Fista,
            "ista" => Algorithm::Ista,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown algorithm {other:?}"
                )))
            }
        },
        step_mode: match step {
            "fixed" => StepMode::Fixed,
            "backtracking" => StepMode::Backtracking,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown step mode {other:?}"
                )))
            }
        },
        gap_tolerance: tol,
        max_iterations: max_iter,
        ..Default::default()
    };
    let problem = Problem::new(matrix, Array1::from(y), w.inner.clone()).map_err(value_error)?;
    let r = py
        .detach(|| core_solve(&problem, &config))
        .map_err(value_error)?;

    let out = PyDict::new(py);
    out.set_item("x", r.x)?;
    out.set_item("objective", r.objective)?;
    out.set_item("duality_gap", r.duality_gap)?;
    out.set_item("relative_gap", r.relative_gap)?;
    out.set_item("iterations", r.iterations)?;
    out.set_item("converged", r.converged)?;
    out.set_item("objective_trace", r.objective_trace)?;
    let clusters: Vec<(Vec<usize>, f64, bool)> = r
        .clusters
        .into_iter()
        .map(|c| (c.indices, c.magnitude, c.zero))
        .collect();
    out.set_item("clusters", clusters)?;
    Ok(out)
}

#[pymodule]
fn owl_norm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWeights>()?;
    m.add_function(wrap_pyfunction!(norm, m)?)?;
    m.add_function(wrap_pyfunction!(dual_norm, m)?)?;
    m.add_function(wrap_pyfunction!(prox, m)?)?;
    m.add_function(wrap_pyfunction!(group_and_average, m)?)?;
    m.add_function(wrap_pyfunction!(ball, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    Ok(())
}
