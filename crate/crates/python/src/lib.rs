//! Python bindings: exact computations and the seeded suites.

use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use igv_core::constructors::make_end_offset;
use igv_core::exactnum::{parse_golden, parse_quad};
use igv_core::harness::{default_trials, run_suite, SUITES};
use igv_core::invariants::{fn_orbit_class, fn_same_orbit, unique_rep as core_unique_rep};
use igv_core::moebius::{cf_expand, pz_witness as core_pz_witness};
use igv_core::piecewise::{parse_any, GroupTag};
use igv_core::Error;

create_exception!(igv, IgvError, PyException);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Usage(_) | Error::Parse { .. } | Error::Num(_) => PyValueError::new_err(e.to_string()),
        _ => IgvError::new_err(e.to_string()),
    }
}

/// Periodic continued fraction of a quadratic irrational, as text.
#[pyfunction]
fn cf(x: &str) -> PyResult<String> {
    let x = parse_quad(x).map_err(|e| py_err(e.into()))?;
    Ok(cf_expand(&x).map_err(py_err)?.to_string())
}

/// Hyperbolic integer matrix fixing `x`, as `[[a,b],[c,d]]`.
#[pyfunction]
fn pz_witness(x: &str) -> PyResult<String> {
    let x = parse_quad(x).map_err(|e| py_err(e.into()))?;
    Ok(core_pz_witness(&x).map_err(py_err)?.to_string())
}

/// `(j, a, b)` with `p = (a + bτ)τʲ` and `0 <= a < b`.
#[pyfunction]
fn unique_rep(p: &str) -> PyResult<(i64, BigInt, BigInt)> {
    let p = parse_golden(p).map_err(|e| py_err(e.into()))?;
    let r = core_unique_rep(&p).map_err(py_err)?;
    Ok((r.j, r.a, r.b))
}

#[pyfunction]
fn orbit_class(x: &str, n: u32) -> PyResult<u32> {
    let x = parse_quad(x).map_err(|e| py_err(e.into()))?;
    fn_orbit_class(&x, n).map_err(py_err)
}

#[pyfunction]
fn same_orbit(x: &str, y: &str, n: u32) -> PyResult<bool> {
    let x = parse_quad(x).map_err(|e| py_err(e.into()))?;
    let y = parse_quad(y).map_err(|e| py_err(e.into()))?;
    fn_same_orbit(&x, &y, n).map_err(py_err)
}

/// Map text of the end-offset element with germs `t+i` and `t+j`.
#[pyfunction]
#[pyo3(signature = (i, j, tag="HZ"))]
fn end_offset(i: i64, j: i64, tag: &str) -> PyResult<String> {
    let tag: GroupTag = tag.parse().map_err(py_err)?;
    Ok(make_end_offset(i, j, tag).map_err(py_err)?.serialize_tagged(Some(tag)))
}

/// Canonical form of map text.
#[pyfunction]
fn fmt(text: &str) -> PyResult<String> {
    let (m, tag) = parse_any(text).map_err(py_err)?;
    Ok(m.serialize_tagged(tag))
}

/// Runs a suite; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (suite, seed=0, trials=None))]
fn verify<'py>(py: Python<'py>, suite: &str, seed: u64, trials: Option<u64>) -> PyResult<Bound<'py, PyDict>> {
    let trials = trials.unwrap_or_else(|| default_trials(suite));
    let r = py.allow_threads(|| run_suite(suite, seed, trials)).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("suite", r.suite)?;
    d.set_item("seed", r.seed)?;
    d.set_item("trials", r.trials)?;
    d.set_item("failures", r.failures)?;
    d.set_item("first_counterexample", r.first_counterexample)?;
    d.set_item("wall_time_ms", r.wall_time_ms)?;
    Ok(d)
}

#[pymodule]
pub fn igv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("IgvError", m.py().get_type::<IgvError>())?;
    m.add("SUITES", SUITES.to_vec())?;
    m.add_function(wrap_pyfunction!(cf, m)?)?;
    m.add_function(wrap_pyfunction!(pz_witness, m)?)?;
    m.add_function(wrap_pyfunction!(unique_rep, m)?)?;
    m.add_function(wrap_pyfunction!(orbit_class, m)?)?;
    m.add_function(wrap_pyfunction!(same_orbit, m)?)?;
    m.add_function(wrap_pyfunction!(end_offset, m)?)?;
    m.add_function(wrap_pyfunction!(fmt, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
