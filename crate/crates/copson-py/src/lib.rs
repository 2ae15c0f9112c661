//! `copson_lab` — Python bindings over `copson-core`.
//!
//! Structured results come back as JSON strings (the same documents the
//! CLI prints), scalars as floats.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use copson_core::evaluator::{eval_inequality, Family, I34Direction, Params};
use copson_core::scalar::{self, Condition, ScalarFn};
use copson_core::sequences::{parse_spec, TestSequence, Weights};
use copson_core::sharpness::{self, DualKernel, RegionMode};
use copson_core::weights::{self, WeightScheme};
use copson_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(_) => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn make_params(p: f64, c: f64, alpha: Option<f64>, reverse: bool) -> Params {
    let mut params = Params::new(p, c);
    params.alpha = alpha;
    params.reverse = reverse;
    params
}

fn sequence(spec: &str, params: &Params, n: usize) -> Result<TestSequence, Error> {
    let spec = parse_spec(spec, Some(params.p), Some(params.c), params.alpha)?;
    TestSequence::from_spec(&spec, n)
}

fn weight_seq(spec: &str, params: &Params, n: usize) -> Result<Weights, Error> {
    let spec = parse_spec(spec, Some(params.p), Some(params.c), params.alpha)?;
    Weights::from_spec(&spec, n)
}

/// Critical exponent c0(p): the root of the endpoint condition in c.
#[pyfunction]
#[pyo3(signature = (p, tol=1e-12))]
fn solve_c0(p: f64, tol: f64) -> PyResult<f64> {
    scalar::solve_c0(p, tol).map_err(py_err)
}

/// Evaluate one of the named scalar functions at x.
#[pyfunction]
#[pyo3(signature = (func, p, c, x, alpha=None))]
fn scalar_eval(func: &str, p: f64, c: f64, x: f64, alpha: Option<f64>) -> PyResult<f64> {
    let f = ScalarFn::parse(func).map_err(py_err)?;
    scalar::scalar_eval(f, &make_params(p, c, alpha, false), x).map_err(py_err)
}

/// Grid-check a scalar sufficient condition; returns the report as JSON.
#[pyfunction]
#[pyo3(signature = (cond, p, c, alpha=None, grid=4096, tol=1e-12))]
fn check_condition(
    cond: &str,
    p: f64,
    c: f64,
    alpha: Option<f64>,
    grid: usize,
    tol: f64,
) -> PyResult<String> {
    let cond = Condition::parse(cond).map_err(py_err)?;
    let check = scalar::check_condition(cond, &make_params(p, c, alpha, false), grid, tol)
        .map_err(py_err)?;
    serde_json::to_string(&check).map_err(json_err)
}

/// Evaluate one truncated inequality; returns the report as JSON.
#[pyfunction]
#[pyo3(signature = (family, p, c, lambda_spec, x_spec, n, alpha=None, reverse=false, forward_diff=false))]
#[allow(clippy::too_many_arguments)]
fn verify(
    family: &str,
    p: f64,
    c: f64,
    lambda_spec: &str,
    x_spec: &str,
    n: usize,
    alpha: Option<f64>,
    reverse: bool,
    forward_diff: bool,
) -> PyResult<String> {
    let family = Family::parse(family).map_err(py_err)?;
    let params = make_params(p, c, alpha, reverse);
    let lam = weight_seq(lambda_spec, &params, n).map_err(py_err)?;
    let x = sequence(x_spec, &params, n).map_err(py_err)?;
    let direction = if forward_diff { I34Direction::ForwardDiff } else { I34Direction::TailDiff };
    let report = eval_inequality(family, &params, &lam, &x, direction).map_err(py_err)?;
    serde_json::to_string(&report).map_err(json_err)
}

/// Build and verify an auxiliary weight certificate; returns JSON.
#[pyfunction]
#[pyo3(signature = (scheme, p, c, lambda_spec, n, alpha=None, tol=1e-9, residuals=false))]
#[allow(clippy::too_many_arguments)]
fn certify(
    scheme: &str,
    p: f64,
    c: f64,
    lambda_spec: &str,
    n: usize,
    alpha: Option<f64>,
    tol: f64,
    residuals: bool,
) -> PyResult<String> {
    let scheme = WeightScheme::parse(scheme).map_err(py_err)?;
    let params = make_params(p, c, alpha, false);
    let lam = weight_seq(lambda_spec, &params, n).map_err(py_err)?;
    let cert = weights::certify(scheme, &params, &lam, n, tol, residuals).map_err(py_err)?;
    serde_json::to_string(&cert).map_err(json_err)
}

/// Near-extremal sharpness scan; returns the scan as JSON.
#[pyfunction]
#[pyo3(signature = (family, p, c, eps, n, alpha=None, bga_a=None))]
fn ratio_scan(
    family: &str,
    p: f64,
    c: f64,
    eps: Vec<f64>,
    n: usize,
    alpha: Option<f64>,
    bga_a: Option<f64>,
) -> PyResult<String> {
    let family = Family::parse(family).map_err(py_err)?;
    let params = make_params(p, c, alpha, false);
    let scan = sharpness::ratio_scan(family, &params, &eps, n, bga_a).map_err(py_err)?;
    serde_json::to_string(&scan).map_err(json_err)
}

/// l^p -> l^p norm estimate of a recast kernel via power iteration.
#[pyfunction]
#[pyo3(signature = (kernel, p, c, lambda_spec, n, alpha=None, tol=1e-12, max_iter=10_000))]
#[allow(clippy::too_many_arguments)]
fn dual_norm(
    kernel: &str,
    p: f64,
    c: f64,
    lambda_spec: &str,
    n: usize,
    alpha: Option<f64>,
    tol: f64,
    max_iter: usize,
) -> PyResult<f64> {
    let kernel = DualKernel::parse(kernel).map_err(py_err)?;
    let params = make_params(p, c, alpha, false);
    let lam = weight_seq(lambda_spec, &params, n).map_err(py_err)?;
    sharpness::dual_norm(kernel, &params, &lam, tol, max_iter).map_err(py_err)
}

/// Classify a parameter grid; returns the region map as JSON.
#[pyfunction]
#[pyo3(signature = (mode, p_axis, second_axis, n=1000, tol=1e-9))]
fn region_map(
    mode: &str,
    p_axis: Vec<f64>,
    second_axis: Vec<f64>,
    n: usize,
    tol: f64,
) -> PyResult<String> {
    let mode = RegionMode::parse(mode).map_err(py_err)?;
    let map = sharpness::region_map(mode, &p_axis, &second_axis, n, tol).map_err(py_err)?;
    serde_json::to_string(&map).map_err(json_err)
}

/// Randomized counterexample search with re-verification; returns JSON.
#[pyfunction]
#[pyo3(signature = (family, p, c, lambda_spec, n, budget, seed=0, alpha=None))]
#[allow(clippy::too_many_arguments)]
fn search(
    family: &str,
    p: f64,
    c: f64,
    lambda_spec: &str,
    n: usize,
    budget: u64,
    seed: u64,
    alpha: Option<f64>,
) -> PyResult<String> {
    let family = Family::parse(family).map_err(py_err)?;
    let params = make_params(p, c, alpha, false);
    let spec = parse_spec(lambda_spec, Some(p), Some(c), alpha).map_err(py_err)?;
    let result =
        sharpness::counterexample_search(family, &params, &spec, n, budget, seed).map_err(py_err)?;
    serde_json::to_string(&result).map_err(json_err)
}

#[pymodule]
fn copson_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(solve_c0, m)?)?;
    m.add_function(wrap_pyfunction!(scalar_eval, m)?)?;
    m.add_function(wrap_pyfunction!(check_condition, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(ratio_scan, m)?)?;
    m.add_function(wrap_pyfunction!(dual_norm, m)?)?;
    m.add_function(wrap_pyfunction!(region_map, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    Ok(())
}
