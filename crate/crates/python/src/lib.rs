//! Python bindings for `uncontrol`.
//!
//! Matrices cross the boundary as lists of rows, vectors as lists of floats.
//! Domain errors raise `ValueError`; numerical failures raise `RuntimeError`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use uncontrol::control::{DEFAULT_RANK_TOL, DEFAULT_ZERO_TOL};
use uncontrol::mc::DEFAULT_TRIALS;
use uncontrol::numerics::Tolerance;
use uncontrol::sampling::{self as smp, InputVector, RngState, SymMatrix};
use uncontrol::theory::{self, CapSpec};

const DEFAULT_ABS_TOL: f64 = 1e-10;

fn py_err(e: uncontrol::Error) -> PyErr {
    if e.is_numerical() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for uncontrol::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn tolerance(abs_tol: f64) -> PyResult<Tolerance> {
    Tolerance::absolute(abs_tol).py()
}

fn matrix(rows: &[Vec<f64>]) -> PyResult<SymMatrix> {
    SymMatrix::from_dense(rows).py()
}

fn system(a: &[Vec<f64>], b: Vec<f64>) -> PyResult<uncontrol::RandomSystem> {
    uncontrol::RandomSystem::new(matrix(a)?, InputVector::new(b).py()?).py()
}

#[pyclass(name = "BoundValue", frozen, from_py_object)]
#[derive(Clone)]
struct PyBoundValue {
    #[pyo3(get)]
    raw: f64,
    #[pyo3(get)]
    clamped: f64,
    #[pyo3(get)]
    kind: String,
}

#[pymethods]
impl PyBoundValue {
    fn __repr__(&self) -> String {
        format!(
            "BoundValue(kind={:?}, raw={}, clamped={})",
            self.kind, self.raw, self.clamped
        )
    }

    fn __float__(&self) -> f64 {
        self.clamped
    }
}

impl From<uncontrol::BoundValue> for PyBoundValue {
    fn from(v: uncontrol::BoundValue) -> Self {
        PyBoundValue {
            raw: v.raw,
            clamped: v.clamped,
            kind: v.kind.label().to_string(),
        }
    }
}

#[pyclass(name = "Estimate", frozen, from_py_object)]
#[derive(Clone)]
struct PyEstimate {
    #[pyo3(get)]
    p_hat: f64,
    #[pyo3(get)]
    successes: u64,
    #[pyo3(get)]
    trials: u64,
    #[pyo3(get)]
    std_err: f64,
    #[pyo3(get)]
    ci95_lo: f64,
    #[pyo3(get)]
    ci95_hi: f64,
    #[pyo3(get)]
    seed: u64,
    #[pyo3(get)]
    resampled: u64,
}

#[pymethods]
impl PyEstimate {
    fn contains(&self, value: f64) -> bool {
        self.ci95_lo <= value && value <= self.ci95_hi
    }

    fn __repr__(&self) -> String {
        format!(
            "Estimate(p_hat={}, successes={}, trials={}, ci95=({}, {}))",
            self.p_hat, self.successes, self.trials, self.ci95_lo, self.ci95_hi
        )
    }
}

impl From<uncontrol::Estimate> for PyEstimate {
    fn from(e: uncontrol::Estimate) -> Self {
        PyEstimate {
            p_hat: e.p_hat,
            successes: e.successes,
            trials: e.trials,
            std_err: e.std_err,
            ci95_lo: e.ci95_lo,
            ci95_hi: e.ci95_hi,
            seed: e.seed,
            resampled: e.resampled,
        }
    }
}

#[pyfunction]
fn log_gamma(x: f64) -> PyResult<f64> {
    uncontrol::numerics::log_gamma(x).py()
}

#[pyfunction]
fn sphere_area(n: usize) -> PyResult<f64> {
    uncontrol::numerics::sphere_area(n).py()
}

#[pyfunction]
fn reg_incomplete_beta(x: f64, a: f64, b: f64) -> PyResult<f64> {
    uncontrol::numerics::reg_incomplete_beta(x, a, b).py()
}

#[pyfunction]
fn p_eps_b_exact_n2(eps: f64, b_norm: f64) -> PyResult<PyBoundValue> {
    theory::p_eps_b_exact_n2(eps, b_norm).py().map(Into::into)
}

#[pyfunction]
#[pyo3(signature = (eps, abs_tol = DEFAULT_ABS_TOL))]
fn p_eps_exact_n2(eps: f64, abs_tol: f64) -> PyResult<PyBoundValue> {
    theory::p_eps_exact_n2(eps, &tolerance(abs_tol)?)
        .py()
        .map(Into::into)
}

#[pyfunction]
fn p_eps_b_bound(eps: f64, b_norm: f64, n: usize) -> PyResult<PyBoundValue> {
    theory::p_eps_b_bound(eps, b_norm, n).py().map(Into::into)
}

#[pyfunction]
#[pyo3(signature = (eps, n, abs_tol = DEFAULT_ABS_TOL))]
fn p_eps_bound_integral(eps: f64, n: usize, abs_tol: f64) -> PyResult<PyBoundValue> {
    theory::p_eps_bound_integral(eps, n, &tolerance(abs_tol)?)
        .py()
        .map(Into::into)
}

#[pyfunction]
fn p_eps_bound_poly(eps: f64, n: usize) -> PyResult<PyBoundValue> {
    theory::p_eps_bound_poly(eps, n).py().map(Into::into)
}

#[pyfunction]
fn poly_coefficients(n: usize) -> PyResult<Vec<f64>> {
    theory::poly_coefficients(n).py()
}

#[pyfunction]
fn growth_rate_bound(n: usize) -> PyResult<f64> {
    theory::growth_rate_bound(n).py()
}

#[pyfunction]
fn cap_measure_exact(n: usize, height: f64) -> PyResult<f64> {
    theory::cap_measure_exact(n, height).py()
}

/// Unnormalized `(lower, upper)` area bounds for the cap of the given height.
#[pyfunction]
fn cap_area_bounds(n: usize, height: f64) -> PyResult<(f64, f64)> {
    let spec = CapSpec::from_height(n, height).py()?;
    Ok((
        theory::cap_area_lower(&spec).py()?,
        theory::cap_area_upper(&spec).py()?,
    ))
}

#[pyfunction]
#[pyo3(signature = (n, eps, trials = DEFAULT_TRIALS, seed = 0, workers = 0))]
fn estimate_p_eps(
    py: Python<'_>,
    n: usize,
    eps: f64,
    trials: u64,
    seed: u64,
    workers: usize,
) -> PyResult<PyEstimate> {
    py.detach(|| uncontrol::estimate_p_eps(n, eps, trials, seed, workers))
        .py()
        .map(Into::into)
}

#[pyfunction]
#[pyo3(signature = (n, eps, b, trials = DEFAULT_TRIALS, seed = 0, workers = 0))]
fn estimate_p_eps_b(
    py: Python<'_>,
    n: usize,
    eps: f64,
    b: Vec<f64>,
    trials: u64,
    seed: u64,
    workers: usize,
) -> PyResult<PyEstimate> {
    let b = InputVector::new(b).py()?;
    py.detach(|| uncontrol::estimate_p_eps_b(n, eps, &b, trials, seed, workers))
        .py()
        .map(Into::into)
}

#[pyfunction]
#[pyo3(signature = (n, height, trials = DEFAULT_TRIALS, seed = 0))]
fn estimate_cap_measure(
    py: Python<'_>,
    n: usize,
    height: f64,
    trials: u64,
    seed: u64,
) -> PyResult<PyEstimate> {
    py.detach(|| uncontrol::estimate_cap_measure(n, height, trials, seed))
        .py()
        .map(Into::into)
}

/// Sweep table as CSV text, identical to the command-line `sweep` output.
#[pyfunction]
#[pyo3(signature = (n_list, eps_grid, trials = 0, seed = 0))]
fn sweep_csv(
    py: Python<'_>,
    n_list: Vec<usize>,
    eps_grid: Vec<f64>,
    trials: u64,
    seed: u64,
) -> PyResult<String> {
    let rows = py
        .detach(|| uncontrol::sweep(&n_list, &eps_grid, trials, seed))
        .py()?;
    Ok(uncontrol::report::sweep_csv(&rows))
}

#[pyfunction]
#[pyo3(signature = (n, seed, stream = 0))]
fn sample_goe(n: usize, seed: u64, stream: u64) -> Vec<Vec<f64>> {
    let mut state = RngState::new(seed, stream);
    smp::sample_goe(&mut state, n).to_dense()
}

#[pyfunction]
#[pyo3(signature = (n, seed, stream = 0))]
fn sample_b(n: usize, seed: u64, stream: u64) -> Vec<f64> {
    let mut state = RngState::new(seed, stream);
    smp::sample_b(&mut state, n).components().to_vec()
}

/// Returns `(eigenvalues, eigenvectors)`; `eigenvectors[i]` pairs with `eigenvalues[i]`.
#[pyfunction]
fn eig_symmetric(a: Vec<Vec<f64>>) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
    let d = uncontrol::eig_symmetric(&matrix(&a)?).py()?;
    let vectors = d.eigenvectors.columns().map(<[f64]>::to_vec).collect();
    Ok((d.eigenvalues, vectors))
}

/// Returns `(z, argmin_index)` with `z = min_i |<v_i, b>|`.
#[pyfunction]
fn coupling_stat(a: Vec<Vec<f64>>, b: Vec<f64>) -> PyResult<(f64, usize)> {
    let c = system(&a, b)?.coupling().py()?;
    Ok((c.z, c.argmin_index))
}

/// `zero_tol` is relative to `‖b‖₂`.
#[pyfunction]
#[pyo3(signature = (a, b, zero_tol = DEFAULT_ZERO_TOL))]
fn is_controllable(a: Vec<Vec<f64>>, b: Vec<f64>, zero_tol: f64) -> PyResult<bool> {
    let sys = system(&a, b)?;
    let d = uncontrol::eig_symmetric(sys.state_matrix()).py()?;
    uncontrol::is_controllable_eig(&d, sys.input(), zero_tol * sys.input().norm()).py()
}

#[pyfunction]
#[pyo3(signature = (a, b, rank_tol = DEFAULT_RANK_TOL))]
fn kalman_rank(a: Vec<Vec<f64>>, b: Vec<f64>, rank_tol: f64) -> PyResult<usize> {
    let sys = system(&a, b)?;
    uncontrol::kalman_rank(sys.state_matrix(), sys.input(), rank_tol).py()
}

#[pymodule]
fn uncontrol_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBoundValue>()?;
    m.add_class::<PyEstimate>()?;
    m.add_function(wrap_pyfunction!(log_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_area, m)?)?;
    m.add_function(wrap_pyfunction!(reg_incomplete_beta, m)?)?;
    m.add_function(wrap_pyfunction!(p_eps_b_exact_n2, m)?)?;
    m.add_function(wrap_pyfunction!(p_eps_exact_n2, m)?)?;
    m.add_function(wrap_pyfunction!(p_eps_b_bound, m)?)?;
    m.add_function(wrap_pyfunction!(p_eps_bound_integral, m)?)?;
    m.add_function(wrap_pyfunction!(p_eps_bound_poly, m)?)?;
    m.add_function(wrap_pyfunction!(poly_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(growth_rate_bound, m)?)?;
    m.add_function(wrap_pyfunction!(cap_measure_exact, m)?)?;
    m.add_function(wrap_pyfunction!(cap_area_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_p_eps, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_p_eps_b, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_cap_measure, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_csv, m)?)?;
    m.add_function(wrap_pyfunction!(sample_goe, m)?)?;
    m.add_function(wrap_pyfunction!(sample_b, m)?)?;
    m.add_function(wrap_pyfunction!(eig_symmetric, m)?)?;
    m.add_function(wrap_pyfunction!(coupling_stat, m)?)?;
    m.add_function(wrap_pyfunction!(is_controllable, m)?)?;
    m.add_function(wrap_pyfunction!(kalman_rank, m)?)?;
    Ok(())
}
