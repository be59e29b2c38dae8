//! Python bindings: formulas, oracles, energies, right-hand sides, integration
//! and the restart solver.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use oscsat::system_two::table_csv as render_table;
use oscsat::{
    Assignment, Dynamics, IntegratorConfig, Objective, PhaseState, S2Mode, SolveConfig,
    SystemKind, SystemParams,
};

fn value_error(e: oscsat::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Formula", module = "oscsat_py", frozen)]
pub struct PyFormula {
    inner: oscsat::Formula,
}

#[pymethods]
impl PyFormula {
    /// Clauses are lists of non-zero DIMACS literals.
    #[new]
    fn new(num_vars: usize, clauses: Vec<Vec<i64>>) -> PyResult<Self> {
        let refs: Vec<&[i64]> = clauses.iter().map(Vec::as_slice).collect();
        oscsat::Formula::from_dimacs_clauses(num_vars, &refs)
            .map(|inner| Self { inner })
            .map_err(value_error)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        oscsat::parse_dimacs(text)
            .map(|inner| Self { inner })
            .map_err(value_error)
    }

    fn to_dimacs(&self) -> String {
        oscsat::serialize_dimacs(&self.inner)
    }

    #[getter]
    fn num_vars(&self) -> usize {
        self.inner.num_vars()
    }

    #[getter]
    fn num_clauses(&self) -> usize {
        self.inner.num_clauses()
    }

    #[getter]
    fn clauses(&self) -> Vec<Vec<i64>> {
        self.inner
            .clauses()
            .iter()
            .map(|c| c.literals().iter().map(|l| l.to_dimacs()).collect())
            .collect()
    }

    /// `(sat_count, nae_count)` under a list of booleans.
    fn eval(&self, assignment: Vec<bool>) -> PyResult<(usize, usize)> {
        let s = oscsat::eval_assignment(&self.inner, &Assignment::new(assignment)).map_err(value_error)?;
        Ok((s.sat_count, s.nae_count))
    }

    fn __repr__(&self) -> String {
        format!("Formula(num_vars={}, num_clauses={})", self.inner.num_vars(), self.inner.num_clauses())
    }
}

#[pyclass(name = "Params", module = "oscsat_py", from_py_object)]
#[derive(Clone)]
pub struct PyParams {
    #[pyo3(get, set)]
    a: f64,
    #[pyo3(get, set)]
    a_s: f64,
    #[pyo3(get, set)]
    omega: f64,
    #[pyo3(get, set)]
    kernel_normalized: bool,
    /// "full", "averaged_printed" or "averaged_gradient".
    #[pyo3(get, set)]
    mode: String,
}

impl From<SystemParams> for PyParams {
    fn from(p: SystemParams) -> Self {
        Self {
            a: p.a,
            a_s: p.a_s,
            omega: p.omega,
            kernel_normalized: p.kernel_normalized,
            mode: p.s2_mode.to_string(),
        }
    }
}

impl PyParams {
    fn to_core(&self) -> PyResult<SystemParams> {
        let p = SystemParams {
            a: self.a,
            a_s: self.a_s,
            omega: self.omega,
            kernel_normalized: self.kernel_normalized,
            s2_mode: self.mode.parse::<S2Mode>().map_err(value_error)?,
        };
        p.validate().map_err(value_error)?;
        Ok(p)
    }
}

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (a=1.0, a_s=0.0, omega=std::f64::consts::TAU, kernel_normalized=false, mode="full"))]
    fn new(a: f64, a_s: f64, omega: f64, kernel_normalized: bool, mode: &str) -> Self {
        Self {
            a,
            a_s,
            omega,
            kernel_normalized,
            mode: mode.to_string(),
        }
    }

    #[staticmethod]
    fn system_one() -> Self {
        SystemParams::system_one().into()
    }

    #[staticmethod]
    fn system_two() -> Self {
        SystemParams::system_two().into()
    }

    fn __repr__(&self) -> String {
        format!(
            "Params(a={}, a_s={}, omega={}, kernel_normalized={}, mode='{}')",
            self.a, self.a_s, self.omega, self.kernel_normalized, self.mode
        )
    }
}

fn system_kind(system: &str) -> PyResult<SystemKind> {
    system.parse().map_err(value_error)
}

fn params_or(params: Option<PyParams>, kind: SystemKind) -> PyResult<SystemParams> {
    match params {
        Some(p) => p.to_core(),
        None => Ok(match kind {
            SystemKind::One => SystemParams::system_one(),
            SystemKind::Two => SystemParams::system_two(),
        }),
    }
}

#[pyfunction]
fn parse_dimacs(text: &str) -> PyResult<PyFormula> {
    PyFormula::parse(text)
}

#[pyfunction]
fn generate(num_vars: usize, num_clauses: usize, seed: u64) -> PyResult<PyFormula> {
    oscsat::generate_random_3sat(num_vars, num_clauses, seed)
        .map(|inner| PyFormula { inner })
        .map_err(value_error)
}

/// Exhaustive optimum: `(best_value, best_assignment, optimal_count)`.
#[pyfunction]
#[pyo3(signature = (formula, objective="sat"))]
fn brute_force(formula: &PyFormula, objective: &str) -> PyResult<(usize, Vec<bool>, u64)> {
    let objective: Objective = objective.parse().map_err(value_error)?;
    let r = oscsat::brute_force(&formula.inner, objective).map_err(value_error)?;
    Ok((r.best_value, r.best_assignment.0, r.optimal_count))
}

#[pyfunction]
#[pyo3(signature = (formula, t, alpha, params=None))]
fn energy_v(formula: &PyFormula, t: f64, alpha: Vec<f64>, params: Option<PyParams>) -> PyResult<f64> {
    let p = params_or(params, SystemKind::One)?;
    check_len(&formula.inner, alpha.len())?;
    Ok(oscsat::energy_v(&formula.inner, &p, &PhaseState::new(t, alpha)))
}

#[pyfunction]
#[pyo3(signature = (formula, t, alpha, params=None))]
fn grad_v(formula: &PyFormula, t: f64, alpha: Vec<f64>, params: Option<PyParams>) -> PyResult<Vec<f64>> {
    let p = params_or(params, SystemKind::One)?;
    check_len(&formula.inner, alpha.len())?;
    Ok(oscsat::grad_v(&formula.inner, &p, &PhaseState::new(t, alpha)))
}

/// Averaged System II energy at phases `phi`.
#[pyfunction]
#[pyo3(signature = (formula, phi, params=None))]
fn energy_e(formula: &PyFormula, phi: Vec<f64>, params: Option<PyParams>) -> PyResult<f64> {
    let p = params_or(params, SystemKind::Two)?;
    oscsat::energy_e(&formula.inner, &p, &phi).map_err(value_error)
}

/// d alpha/dt of either system at state `(t, alpha)`.
#[pyfunction]
#[pyo3(signature = (formula, system, t, alpha, params=None))]
fn rhs(formula: &PyFormula, system: &str, t: f64, alpha: Vec<f64>, params: Option<PyParams>) -> PyResult<Vec<f64>> {
    let kind = system_kind(system)?;
    let p = params_or(params, kind)?;
    check_len(&formula.inner, alpha.len())?;
    let d = Dynamics::new(kind, &formula.inner, p).map_err(value_error)?;
    Ok(d.rhs(&PhaseState::new(t, alpha)))
}

fn check_len(f: &oscsat::Formula, got: usize) -> PyResult<()> {
    if got != f.num_vars() {
        return Err(value_error(oscsat::Error::LengthMismatch {
            expected: f.num_vars(),
            got,
        }));
    }
    Ok(())
}

/// Corner energy table of one clause, as CSV.
#[pyfunction]
#[pyo3(signature = (a=1.0, a_s=0.0))]
fn clause_energy_table(a: f64, a_s: f64) -> PyResult<String> {
    let p = SystemParams {
        a,
        a_s,
        ..SystemParams::default()
    };
    p.validate().map_err(value_error)?;
    Ok(render_table(&oscsat::clause_energy_table(&p)))
}

/// One seeded run from a uniform random state; returns columns of the trace.
#[pyfunction]
#[pyo3(signature = (formula, system="one", params=None, periods=100.0, dt=1e-3, a_n=5e-4, seed=0, stride=100))]
#[allow(clippy::too_many_arguments)]
fn integrate<'py>(
    py: Python<'py>,
    formula: &PyFormula,
    system: &str,
    params: Option<PyParams>,
    periods: f64,
    dt: f64,
    a_n: f64,
    seed: u64,
    stride: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let kind = system_kind(system)?;
    let p = params_or(params, kind)?;
    let d = Dynamics::new(kind, &formula.inner, p).map_err(value_error)?;
    let cfg = IntegratorConfig {
        dt,
        t_end: periods * p.period(),
        a_n,
        rng_seed: seed,
        sample_stride: stride,
    };
    let trace = py
        .detach(|| oscsat::integrate_from_random(&d, &cfg, &mut ()))
        .map_err(value_error)?;
    let out = PyDict::new(py);
    let col = |f: fn(&oscsat::TraceRow) -> f64| trace.rows.iter().map(f).collect::<Vec<f64>>();
    out.set_item("t", col(|r| r.t))?;
    out.set_item("energy", col(|r| r.energy))?;
    out.set_item("sat_count", trace.rows.iter().map(|r| r.sat_count).collect::<Vec<_>>())?;
    out.set_item("nae_count", trace.rows.iter().map(|r| r.nae_count).collect::<Vec<_>>())?;
    out.set_item("alpha", trace.rows.iter().map(|r| r.alpha.clone()).collect::<Vec<_>>())?;
    out.set_item("x", trace.rows.iter().map(|r| r.x.0.clone()).collect::<Vec<_>>())?;
    Ok(out)
}

/// Restart solver. Returns the report as a dict; `report_json` holds the full record.
#[pyfunction]
#[pyo3(signature = (formula, system="one", params=None, objective=None, restarts=20, periods=100.0, seed=0, workers=None))]
#[allow(clippy::too_many_arguments)]
fn solve<'py>(
    py: Python<'py>,
    formula: &PyFormula,
    system: &str,
    params: Option<PyParams>,
    objective: Option<&str>,
    restarts: usize,
    periods: f64,
    seed: u64,
    workers: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let kind = system_kind(system)?;
    let p = params_or(params, kind)?;
    let mut cfg = SolveConfig::new(kind, p);
    if let Some(o) = objective {
        cfg.objective = o.parse().map_err(value_error)?;
    }
    cfg.restarts = restarts;
    cfg.workers = workers;
    cfg.integrator.t_end = periods * p.period();
    cfg.integrator.rng_seed = seed;
    let report = py
        .detach(|| oscsat::run_solve(&formula.inner, &cfg))
        .map_err(value_error)?;
    let status = serde_json::to_value(report.status).expect("status serializes");
    let out = PyDict::new(py);
    out.set_item("status", status.as_str())?;
    out.set_item("objective", report.objective.to_string())?;
    out.set_item("best_value", report.best_value)?;
    out.set_item("target_value", report.target_value)?;
    out.set_item("best_assignment", report.best_assignment.0.clone())?;
    out.set_item("restarts_used", report.restarts_used)?;
    out.set_item("total_steps", report.total_steps)?;
    out.set_item("wall_time", report.wall_time)?;
    out.set_item("report_json", serde_json::to_string(&report).expect("report serializes"))?;
    Ok(out)
}

/// Adds every class, function and constant to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFormula>()?;
    m.add_class::<PyParams>()?;
    m.add_function(wrap_pyfunction!(parse_dimacs, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(energy_v, m)?)?;
    m.add_function(wrap_pyfunction!(grad_v, m)?)?;
    m.add_function(wrap_pyfunction!(energy_e, m)?)?;
    m.add_function(wrap_pyfunction!(rhs, m)?)?;
    m.add_function(wrap_pyfunction!(clause_energy_table, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add("SAMPLE_CNF", oscsat::SAMPLE_CNF)?;
    Ok(())
}

#[pymodule]
fn oscsat_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
