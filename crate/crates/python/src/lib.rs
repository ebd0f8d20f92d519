//! Python module `bellforge`.
//!
//! Rationals cross the boundary as strings such as `"-3/2"`; structured
//! results come back as plain dicts and lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use bellforge::inequality::{self, Catalog};
use bellforge::polytope::{enumerate_vertices, DeterministicStrategy, PolytopeKind, Scenario};
use bellforge::quantum::{self, SeesawConfig, ThreeQubitState, Triad, ZbConfig};
use bellforge::{fixtures, rational, tightness, transforms, Limits};

fn err(e: bellforge::Error) -> PyErr {
    PyValueError::new_err(format!("{}: {e}", e.kind()))
}

fn to_py<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// A two-outcome Bell inequality with exact rational coefficients.
#[pyclass(name = "Inequality", module = "bellforge", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyInequality {
    inner: inequality::BellInequality,
}

#[pymethods]
impl PyInequality {
    /// Entry `name` of the built-in catalog (`I10`, `H10`, `CHSH`).
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        let inner = fixtures::builtin_catalog().get(name).map_err(err)?.clone();
        Ok(PyInequality { inner })
    }

    /// Entry `name` of a catalog given as JSON text.
    #[staticmethod]
    fn from_json(text: &str, name: &str) -> PyResult<Self> {
        let inner = Catalog::parse(text).map_err(err)?.get(name).map_err(err)?.clone();
        Ok(PyInequality { inner })
    }

    /// Builds an inequality from `(tuple, coefficient)` pairs; setting `0`
    /// in a tuple leaves that party unmeasured.
    #[new]
    #[pyo3(signature = (name, settings, terms, lower=None, upper=None))]
    fn new(
        name: String,
        settings: Vec<usize>,
        terms: Vec<(Vec<usize>, String)>,
        lower: Option<String>,
        upper: Option<String>,
    ) -> PyResult<Self> {
        let parse = |s: &str| {
            rational::parse(s).ok_or_else(|| PyValueError::new_err(format!("bad rational `{s}`")))
        };
        let scenario = Scenario::new(settings).map_err(err)?;
        let mut parsed = Vec::with_capacity(terms.len());
        for (t, c) in terms {
            parsed.push((t, parse(&c)?));
        }
        let lower = lower.as_deref().map(parse).transpose()?;
        let upper = upper.as_deref().map(parse).transpose()?;
        let inner = inequality::BellInequality::new(name, scenario, parsed, lower, upper).map_err(err)?;
        Ok(PyInequality { inner })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn settings(&self) -> Vec<usize> {
        self.inner.scenario().settings().to_vec()
    }

    #[getter]
    fn terms(&self) -> Vec<(Vec<usize>, String)> {
        self.inner
            .terms()
            .iter()
            .map(|(t, c)| (t.clone(), rational::format(c)))
            .collect()
    }

    #[getter]
    fn lower(&self) -> Option<String> {
        self.inner.lower().map(rational::format)
    }

    #[getter]
    fn upper(&self) -> Option<String> {
        self.inner.upper().map(rational::format)
    }

    fn is_homogeneous(&self) -> bool {
        self.inner.is_homogeneous()
    }

    /// Value on a deterministic strategy given as ±1 lists per party.
    fn evaluate(&self, strategy: Vec<Vec<i8>>) -> PyResult<String> {
        let s = DeterministicStrategy::new(strategy).map_err(err)?;
        Ok(rational::format(&self.inner.evaluate(&s).map_err(err)?))
    }

    /// `(min, max)` over all deterministic strategies.
    fn local_bounds(&self) -> PyResult<(String, String)> {
        let b = self.inner.local_bounds(&Limits::default()).map_err(err)?;
        Ok((rational::format(&b.min), rational::format(&b.max)))
    }

    /// One-entry catalog document.
    fn to_json(&self) -> String {
        inequality::serialize_catalog(std::slice::from_ref(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!(
            "Inequality({:?}, settings={}, terms={})",
            self.inner.name,
            self.inner.scenario(),
            self.inner.terms().len()
        )
    }
}

/// Number of vertices of the local polytope (`kind` is `full` or `all`).
#[pyfunction]
#[pyo3(signature = (settings, kind="full"))]
fn vertex_count(settings: Vec<usize>, kind: &str) -> PyResult<usize> {
    let kind: PolytopeKind = kind.parse().map_err(err)?;
    let scenario = Scenario::new(settings).map_err(err)?;
    Ok(enumerate_vertices(&scenario, kind, &Limits::default()).map_err(err)?.len())
}

#[pyfunction]
#[pyo3(signature = (ineq, integer=false))]
fn homogenize(ineq: &PyInequality, integer: bool) -> PyResult<PyInequality> {
    let mut h = transforms::homogenize(&ineq.inner, &Limits::default()).map_err(err)?;
    if integer {
        h = h.normalized_to_integers();
    }
    Ok(PyInequality { inner: h.inequality })
}

#[pyfunction]
fn dehomogenize(ineq: &PyInequality, signs: Vec<i8>) -> PyResult<PyInequality> {
    let inner = transforms::dehomogenize(&ineq.inner, &signs).map_err(err)?;
    Ok(PyInequality { inner })
}

/// Facet report for the `lower` or `upper` bound, without the vertex list.
#[pyfunction]
fn is_tight(py: Python<'_>, ineq: &PyInequality, side: &str) -> PyResult<Py<PyAny>> {
    let side: tightness::Side = side.parse().map_err(err)?;
    let mut report = tightness::is_tight(&ineq.inner, side, &Limits::default()).map_err(err)?;
    report.saturating_vertices.clear();
    to_py(py, &report)
}

#[pyfunction]
fn equivalent(a: &PyInequality, b: &PyInequality) -> PyResult<bool> {
    Ok(inequality::equivalent(&a.inner, &b.inner, &Limits::default())
        .map_err(err)?
        .is_some())
}

/// Seesaw search for the largest violation factor.
#[pyfunction]
#[pyo3(signature = (ineq, restarts=50, seed=None))]
fn seesaw(py: Python<'_>, ineq: &PyInequality, restarts: usize, seed: Option<u64>) -> PyResult<Py<PyAny>> {
    let defaults = SeesawConfig::default();
    let config = SeesawConfig {
        restarts,
        seed: seed.unwrap_or(defaults.seed),
        ..defaults
    };
    let inner = ineq.inner.clone();
    let result = py
        .detach(move || quantum::seesaw_maximize(&inner, &config))
        .map_err(err)?;
    to_py(py, &result)
}

/// Quadratic correlation condition for the canonical state with parameters
/// `lambdas`, `phi`; maximized over local frames when `optimize` is set.
#[pyfunction]
#[pyo3(signature = (lambdas, phi=0.0, optimize=true))]
fn zb_condition(lambdas: [f64; 5], phi: f64, optimize: bool) -> PyResult<f64> {
    let state = ThreeQubitState::new(lambdas, phi).map_err(err)?;
    if optimize {
        Ok(quantum::zb_condition_max(&state, &ZbConfig::default()).map_err(err)?.value)
    } else {
        quantum::zb_condition(&state, &[Triad::standard(); 3]).map_err(err)
    }
}

#[pymodule]
#[pyo3(name = "bellforge")]
fn bellforge_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInequality>()?;
    m.add_function(wrap_pyfunction!(vertex_count, m)?)?;
    m.add_function(wrap_pyfunction!(homogenize, m)?)?;
    m.add_function(wrap_pyfunction!(dehomogenize, m)?)?;
    m.add_function(wrap_pyfunction!(is_tight, m)?)?;
    m.add_function(wrap_pyfunction!(equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(seesaw, m)?)?;
    m.add_function(wrap_pyfunction!(zb_condition, m)?)?;
    Ok(())
}
