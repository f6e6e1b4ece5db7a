//! Python bindings: operators, model parameters, vacua, certificates and report runs.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

use pbqdho::gaussian::{self, GaussianPolynomial, QuadraticForm};
use pbqdho::nogo;
use pbqdho::operator::{self, FirstOrderOperator, WeightedSpace};
use pbqdho::qdho;
use pbqdho::report::{self, ParamsFile, RunConfig, Subcommand};
use pbqdho::vacuum::{self, VacuumAnsatz};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Serialize through JSON into plain Python objects.
fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(value_error)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn space(c1: f64, c2: f64) -> PyResult<WeightedSpace> {
    if !(c1.is_finite() && c2.is_finite()) {
        return Err(value_error("weights must be finite"));
    }
    Ok(WeightedSpace::new(c1, c2))
}

/// `cx·x + cy·y + dx·∂x + dy·∂y + e`.
#[pyclass(name = "Operator", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyOperator(FirstOrderOperator);

#[pymethods]
impl PyOperator {
    #[new]
    #[pyo3(signature = (cx = Complex64::new(0.0, 0.0), cy = Complex64::new(0.0, 0.0), dx = Complex64::new(0.0, 0.0), dy = Complex64::new(0.0, 0.0), e = Complex64::new(0.0, 0.0)))]
    fn new(cx: Complex64, cy: Complex64, dx: Complex64, dy: Complex64, e: Complex64) -> Self {
        Self(FirstOrderOperator::new(cx, cy, dx, dy, e))
    }

    #[staticmethod]
    fn x() -> Self {
        Self(FirstOrderOperator::x())
    }

    #[staticmethod]
    fn y() -> Self {
        Self(FirstOrderOperator::y())
    }

    #[staticmethod]
    fn d_x() -> Self {
        Self(FirstOrderOperator::d_x())
    }

    #[staticmethod]
    fn d_y() -> Self {
        Self(FirstOrderOperator::d_y())
    }

    #[staticmethod]
    fn identity() -> Self {
        Self(FirstOrderOperator::identity())
    }

    /// `(cx, cy, dx, dy, e)`.
    fn coefficients(&self) -> [Complex64; 5] {
        self.0.coefficients()
    }

    fn commutator(&self, other: &PyOperator) -> Complex64 {
        operator::commutator(&self.0, &other.0)
    }

    #[pyo3(signature = (c1 = 0.0, c2 = 0.0))]
    fn adjoint(&self, c1: f64, c2: f64) -> PyResult<Self> {
        Ok(Self(operator::adjoint(&self.0, &space(c1, c2)?)))
    }

    fn __add__(&self, other: &PyOperator) -> Self {
        Self(self.0 + other.0)
    }

    fn __sub__(&self, other: &PyOperator) -> Self {
        Self(self.0 - other.0)
    }

    fn __neg__(&self) -> Self {
        Self(-self.0)
    }

    fn __mul__(&self, s: Complex64) -> Self {
        Self(s * self.0)
    }

    fn __rmul__(&self, s: Complex64) -> Self {
        Self(s * self.0)
    }

    fn __eq__(&self, other: &PyOperator) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Operator({})", self.0)
    }
}

/// Validated damped-oscillator parameters.
#[pyclass(name = "ModelParams", frozen)]
struct PyModelParams(qdho::ModelParams);

#[pymethods]
impl PyModelParams {
    #[new]
    fn new(m: f64, gamma: f64, k: f64, big_gamma: Complex64, delta: Complex64) -> PyResult<Self> {
        qdho::build_params(m, gamma, k, big_gamma, delta).map(Self).map_err(value_error)
    }

    #[getter]
    fn omega_plus(&self) -> Complex64 {
        self.0.omega_plus
    }

    #[getter]
    fn omega_minus(&self) -> Complex64 {
        self.0.omega_minus
    }

    #[getter]
    fn alpha(&self) -> Complex64 {
        self.0.alpha
    }

    #[getter]
    fn beta(&self) -> Complex64 {
        self.0.beta
    }

    fn ratio_defect(&self) -> PyResult<Complex64> {
        vacuum::ratio_condition_defect(&self.0).map_err(value_error)
    }

    /// `(a₊, a₋, b₊, b₋)`.
    fn ladder(&self) -> PyResult<(PyOperator, PyOperator, PyOperator, PyOperator)> {
        let q = qdho::build_pseudo_bosons(&self.0).map_err(value_error)?;
        Ok((PyOperator(q.a_plus), PyOperator(q.a_minus), PyOperator(q.b_plus), PyOperator(q.b_minus)))
    }

    fn ccr<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        let q = qdho::build_pseudo_bosons(&self.0).map_err(value_error)?;
        to_py(py, &operator::check_pseudo_boson_ccr(&q.a_plus, &q.a_minus, &q.b_plus, &q.b_minus, tol))
    }

    fn sign_obstruction<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &nogo::sign_obstruction(&self.0).map_err(value_error)?)
    }

    fn weighted_infeasibility<'py>(&self, py: Python<'py>, c_max: f64, n_grid: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &nogo::weighted_infeasibility(&self.0, c_max, n_grid).map_err(value_error)?)
    }

    fn __repr__(&self) -> String {
        let p = &self.0;
        format!("ModelParams(m={}, gamma={}, k={}, Gamma={}, delta={})", p.m, p.gamma, p.k, p.big_gamma, p.delta)
    }
}

fn ansatz(name: &str) -> PyResult<VacuumAnsatz> {
    match name {
        "diagonal" => Ok(VacuumAnsatz::Diagonal),
        "full" => Ok(VacuumAnsatz::Full),
        "shifted" => Ok(VacuumAnsatz::Shifted),
        other => Err(value_error(format!("unknown ansatz '{other}'"))),
    }
}

/// Joint Gaussian vacuum of two operators, as a dict; `ValueError` if none exists.
#[pyfunction]
#[pyo3(signature = (a1, a2, ansatz_name = "full"))]
fn solve_vacuum<'py>(py: Python<'py>, a1: &PyOperator, a2: &PyOperator, ansatz_name: &str) -> PyResult<Bound<'py, PyAny>> {
    let s = vacuum::solve_vacuum(&a1.0, &a2.0, ansatz(ansatz_name)?).map_err(value_error)?;
    to_py(py, &s)
}

fn form(q: (Complex64, Complex64, Complex64)) -> QuadraticForm {
    QuadraticForm::new(q.0, q.1, q.2)
}

/// `⟨exp(−q_f), exp(−q_g)⟩` in the weighted space; `ValueError` on divergence.
#[pyfunction]
#[pyo3(signature = (q_f, q_g, c1 = 0.0, c2 = 0.0))]
fn gaussian_inner_product(q_f: (Complex64, Complex64, Complex64), q_g: (Complex64, Complex64, Complex64), c1: f64, c2: f64) -> PyResult<Complex64> {
    let f = GaussianPolynomial::gaussian(form(q_f));
    let g = GaussianPolynomial::gaussian(form(q_g));
    gaussian::inner_product(&f, &g, &space(c1, c2)?).map_err(value_error)
}

#[pyfunction]
#[pyo3(signature = (q, c1 = 0.0, c2 = 0.0))]
fn is_integrable(q: (Complex64, Complex64, Complex64), c1: f64, c2: f64) -> PyResult<bool> {
    Ok(gaussian::integrability_check(&GaussianPolynomial::gaussian(form(q)), &space(c1, c2)?).integrable)
}

#[pyfunction]
#[pyo3(signature = (mode, samples, seed))]
fn ansatz_search<'py>(py: Python<'py>, mode: &str, samples: u64, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let mode: nogo::AnsatzMode = mode.parse().map_err(value_error)?;
    let r = py.detach(|| nogo::general_ansatz_search(mode, samples, seed)).map_err(value_error)?;
    to_py(py, &r)
}

/// Runs a CLI subcommand in-process and returns the report as a dict.
///
/// `options` keys mirror the CLI flags with underscores: `seed`, `truncation`,
/// `grid`, `cmax`, `samples`, `mode`, `expect_divergence`, `expect_no_solution`,
/// `tol_alg`, `tol_int`.
#[pyfunction]
#[pyo3(signature = (subcommand, params_json = None, **options))]
fn run<'py>(py: Python<'py>, subcommand: &str, params_json: Option<&str>, options: Option<&Bound<'py, PyDict>>) -> PyResult<Bound<'py, PyAny>> {
    let sub: Subcommand = serde_json::from_value(serde_json::Value::String(subcommand.into())).map_err(|_| value_error(format!("unknown subcommand '{subcommand}'")))?;
    let params = params_json.map(ParamsFile::from_json).transpose().map_err(value_error)?;
    let mut cfg = RunConfig::new(sub, params);
    if let Some(o) = options {
        for (key, value) in o.iter() {
            let key: String = key.extract()?;
            match key.as_str() {
                "seed" => cfg.seed = value.extract()?,
                "truncation" => cfg.truncation = value.extract()?,
                "grid" => cfg.grid = value.extract()?,
                "cmax" => cfg.cmax = value.extract()?,
                "samples" => cfg.samples = value.extract()?,
                "mode" => cfg.mode = value.extract::<String>()?.parse().map_err(value_error)?,
                "expect_divergence" => cfg.expect_divergence = value.extract()?,
                "expect_no_solution" => cfg.expect_no_solution = value.extract()?,
                "tol_alg" => cfg.tol_alg = value.extract()?,
                "tol_int" => cfg.tol_int = value.extract()?,
                other => return Err(value_error(format!("unknown option '{other}'"))),
            }
        }
    }
    let doc = py.detach(|| report::run_subcommand(&cfg, "")).map_err(value_error)?;
    to_py(py, &doc)
}

#[pymodule(name = "pbqdho")]
fn pbqdho_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOperator>()?;
    m.add_class::<PyModelParams>()?;
    m.add_function(wrap_pyfunction!(solve_vacuum, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_inner_product, m)?)?;
    m.add_function(wrap_pyfunction!(is_integrable, m)?)?;
    m.add_function(wrap_pyfunction!(ansatz_search, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
