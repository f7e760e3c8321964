//! Python bindings for the `augucb` crate.

use std::collections::HashMap;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use augucb::bounds::{self as core_bounds, BoundInputs, TheoreticalBounds};
use augucb::complexity::ComplexityReport;
use augucb::experiments::{self, ExperimentSpec, RosterEntry};
use augucb::policy::UcbevWidth;
use augucb::{PolicyKind, PolicyParams, RngStream, Step};

create_exception!(augucb_py, AugucbError, PyValueError);

fn err(e: augucb::Error) -> PyErr {
    AugucbError::new_err(e.to_string())
}

#[pyclass(name = "Arm", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyArm(augucb::ArmSpec);

#[pymethods]
impl PyArm {
    #[staticmethod]
    fn gaussian(mean: f64, variance: f64) -> PyResult<Self> {
        augucb::ArmSpec::gaussian(mean, variance)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    fn bernoulli(p: f64) -> PyResult<Self> {
        augucb::ArmSpec::bernoulli(p).map(Self).map_err(err)
    }

    #[staticmethod]
    fn constant(value: f64) -> PyResult<Self> {
        augucb::ArmSpec::constant(value).map(Self).map_err(err)
    }

    #[getter]
    fn mean(&self) -> f64 {
        self.0.mean()
    }

    #[getter]
    fn variance(&self) -> f64 {
        self.0.variance()
    }

    fn __repr__(&self) -> String {
        format!("Arm({:?})", self.0.distribution())
    }
}

#[pyclass(name = "BanditInstance", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyInstance(augucb::BanditInstance);

#[pymethods]
impl PyInstance {
    #[new]
    fn new(arms: Vec<PyRef<'_, PyArm>>, threshold: f64) -> PyResult<Self> {
        let arms = arms.iter().map(|a| a.0).collect();
        augucb::BanditInstance::new(arms, threshold)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn num_arms(&self) -> usize {
        self.0.num_arms()
    }

    #[getter]
    fn threshold(&self) -> f64 {
        self.0.threshold()
    }

    fn means(&self) -> Vec<f64> {
        self.0.means()
    }

    fn variances(&self) -> Vec<f64> {
        self.0.variances()
    }

    fn true_positive_set(&self) -> Vec<usize> {
        self.0.true_positive_set()
    }

    /// Draws `n` rewards from `arm` using a fresh stream seeded with `seed`.
    fn sample(&self, arm: usize, n: usize, seed: u64) -> PyResult<Vec<f64>> {
        if arm >= self.0.num_arms() {
            return Err(err(augucb::Error::InvalidArm(format!(
                "arm {arm} out of range"
            ))));
        }
        let mut rng = RngStream::new(seed);
        Ok((0..n).map(|_| self.0.arm(arm).sample(&mut rng)).collect())
    }

    fn complexity(&self) -> PyComplexity {
        PyComplexity(ComplexityReport::from_instance(&self.0))
    }

    fn __repr__(&self) -> String {
        format!(
            "BanditInstance(num_arms={}, threshold={})",
            self.0.num_arms(),
            self.0.threshold()
        )
    }
}

#[pyclass(name = "ArmStats", skip_from_py_object)]
#[derive(Clone, Default)]
struct PyArmStats(augucb::ArmStats);

#[pymethods]
impl PyArmStats {
    #[new]
    #[pyo3(signature = (observations = None))]
    fn new(observations: Option<Vec<f64>>) -> Self {
        Self(augucb::ArmStats::from_observations(
            observations.unwrap_or_default(),
        ))
    }

    fn push(&mut self, x: f64) {
        self.0.push(x);
    }

    #[getter]
    fn count(&self) -> u64 {
        self.0.count()
    }

    #[getter]
    fn mean(&self) -> Option<f64> {
        self.0.mean()
    }

    #[getter]
    fn variance(&self) -> Option<f64> {
        self.0.variance()
    }
}

#[pyclass(name = "ComplexityReport", frozen)]
struct PyComplexity(ComplexityReport);

#[pymethods]
impl PyComplexity {
    #[getter]
    fn gaps(&self) -> Vec<f64> {
        self.0.gaps.clone()
    }

    #[getter]
    fn gaps_tilde(&self) -> Vec<f64> {
        self.0.gaps_tilde.clone()
    }

    #[getter]
    fn h1(&self) -> f64 {
        self.0.h1
    }

    #[getter]
    fn h2(&self) -> f64 {
        self.0.h2
    }

    #[getter]
    fn h_csar2(&self) -> f64 {
        self.0.h_csar2
    }

    #[getter]
    fn h_sigma1(&self) -> f64 {
        self.0.h_sigma1
    }

    #[getter]
    fn h_sigma2(&self) -> f64 {
        self.0.h_sigma2
    }

    #[getter]
    fn infinite(&self) -> bool {
        self.0.infinite
    }
}

#[allow(clippy::too_many_arguments)]
fn params(
    kind: &str,
    rho: f64,
    apt_margin: f64,
    exploration: Option<f64>,
    ucbev_multiplier: f64,
    ucbev_width: &str,
) -> PyResult<PolicyParams> {
    let kind: PolicyKind = kind.parse().map_err(err)?;
    let width = match ucbev_width {
        "bernstein" => UcbevWidth::Bernstein,
        "ucbe" => UcbevWidth::Ucbe,
        other => {
            return Err(AugucbError::new_err(format!(
                "unknown UCBEV width '{other}'"
            )))
        }
    };
    let mut p = PolicyParams::new(kind)
        .with_rho(rho)
        .with_apt_margin(apt_margin)
        .with_ucbev_multiplier(ucbev_multiplier)
        .with_ucbev_width(width);
    p.exploration = exploration;
    p.validate().map_err(err)?;
    Ok(p)
}

/// A policy driven step by step from Python.
#[pyclass(name = "Policy", unsendable)]
struct PyPolicy {
    inner: Box<dyn augucb::Policy>,
    rng: RngStream,
}

#[pymethods]
impl PyPolicy {
    #[new]
    #[pyo3(signature = (
        instance, budget, kind, seed = 0, *, rho = 1.0 / 3.0, apt_margin = 0.05,
        exploration = None, ucbev_multiplier = 1.0, ucbev_width = "bernstein"
    ))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        instance: PyRef<'_, PyInstance>,
        budget: u64,
        kind: &str,
        seed: u64,
        rho: f64,
        apt_margin: f64,
        exploration: Option<f64>,
        ucbev_multiplier: f64,
        ucbev_width: &str,
    ) -> PyResult<Self> {
        let p = params(
            kind,
            rho,
            apt_margin,
            exploration,
            ucbev_multiplier,
            ucbev_width,
        )?;
        let mut rng = RngStream::new(seed);
        let inner = augucb::build_policy(&instance.0, budget, &p, &mut rng).map_err(err)?;
        Ok(Self { inner, rng })
    }

    /// One pull. Returns `(arm, reward)`, or `None` once the policy halted.
    fn step(&mut self) -> PyResult<Option<(usize, f64)>> {
        match self.inner.step(&mut self.rng).map_err(err)? {
            Step::Pulled { arm, reward } => Ok(Some((arm, reward))),
            Step::Halted => Ok(None),
        }
    }

    /// Steps until the budget is spent or the policy halts; returns the
    /// number of pulls made by this call.
    fn run(&mut self) -> PyResult<u64> {
        let before = self.inner.pulls();
        while self.inner.pulls() < self.inner.budget() && !self.inner.is_halted() {
            if let Step::Halted = self.inner.step(&mut self.rng).map_err(err)? {
                break;
            }
        }
        Ok(self.inner.pulls() - before)
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().name()
    }

    #[getter]
    fn pulls(&self) -> u64 {
        self.inner.pulls()
    }

    #[getter]
    fn budget(&self) -> u64 {
        self.inner.budget()
    }

    #[getter]
    fn halted(&self) -> bool {
        self.inner.is_halted()
    }

    fn classification(&self) -> Vec<usize> {
        self.inner.classification()
    }

    fn is_misclassified(&self) -> bool {
        self.inner.is_misclassified()
    }

    fn arm_stats(&self, arm: usize) -> PyResult<PyArmStats> {
        let stats = self.inner.tracker().stats();
        stats
            .get(arm)
            .map(|s| PyArmStats(*s))
            .ok_or_else(|| AugucbError::new_err(format!("arm {arm} out of range")))
    }
}

/// Per-step misclassification indicators of one run.
#[pyfunction]
#[pyo3(signature = (
    instance, budget, kind, seed = 0, *, rho = 1.0 / 3.0, apt_margin = 0.05,
    exploration = None, ucbev_multiplier = 1.0, ucbev_width = "bernstein"
))]
#[allow(clippy::too_many_arguments)]
fn run_single(
    py: Python<'_>,
    instance: PyRef<'_, PyInstance>,
    budget: u64,
    kind: &str,
    seed: u64,
    rho: f64,
    apt_margin: f64,
    exploration: Option<f64>,
    ucbev_multiplier: f64,
    ucbev_width: &str,
) -> PyResult<Vec<bool>> {
    let p = params(
        kind,
        rho,
        apt_margin,
        exploration,
        ucbev_multiplier,
        ucbev_width,
    )?;
    let inst = instance.0.clone();
    py.detach(|| experiments::run_single(&p, &inst, budget, &mut RngStream::new(seed)))
        .map(|s| s.errors)
        .map_err(err)
}

/// Error-percentage curves of a benchmark scenario, keyed by roster label.
#[pyfunction]
#[pyo3(signature = (
    experiment, budget = experiments::DEFAULT_BUDGET, iterations = 100, seed = 0,
    parallelism = 1, algorithms = None
))]
fn run_batch(
    py: Python<'_>,
    experiment: u32,
    budget: u64,
    iterations: usize,
    seed: u64,
    parallelism: usize,
    algorithms: Option<Vec<String>>,
) -> PyResult<HashMap<String, Vec<f64>>> {
    let spec = ExperimentSpec::new(experiment)
        .map_err(err)?
        .with_budget(budget);
    let default = spec.roster();
    let roster: Vec<RosterEntry> = match algorithms {
        None => default,
        Some(names) => names
            .iter()
            .map(|n| match default.iter().find(|e| &e.label == n) {
                Some(e) => Ok(e.clone()),
                None => n.parse().map(RosterEntry::new).map_err(err),
            })
            .collect::<PyResult<_>>()?,
    };
    let series = py
        .detach(|| experiments::run_batch(&spec, &roster, iterations, seed, parallelism))
        .map_err(err)?;
    Ok(series.into_iter().map(|s| (s.label, s.error_pct)).collect())
}

/// Scenario instance drawn with `seed` plus its roster labels.
#[pyfunction]
fn make_experiment(id: u32, seed: u64) -> PyResult<(PyInstance, Vec<String>)> {
    let (inst, roster) = experiments::make_experiment(id, seed).map_err(err)?;
    Ok((
        PyInstance(inst),
        roster.into_iter().map(|e| e.label).collect(),
    ))
}

#[pyfunction]
fn complexity(gaps: Vec<f64>, sigmas: Vec<f64>) -> PyResult<PyComplexity> {
    if gaps.len() != sigmas.len() {
        return Err(AugucbError::new_err("gaps and sigmas differ in length"));
    }
    Ok(PyComplexity(ComplexityReport::from_parts(gaps, &sigmas)))
}

#[pyfunction]
fn target_round(gap: f64, rho: f64) -> PyResult<u32> {
    if !(gap > 0.0 && rho > 0.0) {
        return Err(AugucbError::new_err("gap and rho must be positive"));
    }
    Ok(core_bounds::target_round(gap, rho))
}

#[pyfunction]
#[pyo3(signature = (budget, gaps, rho = 1.0 / 3.0, b = None))]
fn regret_bound(budget: u64, gaps: Vec<f64>, rho: f64, b: Option<f64>) -> PyResult<f64> {
    let b = b.unwrap_or_else(|| core_bounds::min_regret_b(budget));
    core_bounds::augucb_regret_bound(budget, &gaps, rho, b).map_err(err)
}

/// All bounds for `instance` at `budget`, as a dict of `(value, vacuous)`
/// pairs plus the regret split point and any applicability warnings.
#[pyfunction]
#[pyo3(signature = (instance, budget, b = None, rho = 1.0 / 3.0))]
fn theoretical_bounds<'py>(
    py: Python<'py>,
    instance: PyRef<'_, PyInstance>,
    budget: u64,
    b: Option<f64>,
    rho: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let mut inputs = BoundInputs::new(budget, ComplexityReport::from_instance(&instance.0));
    inputs.b = b;
    inputs.rho = rho;
    let t = TheoreticalBounds::evaluate(&inputs).map_err(err)?;
    let d = PyDict::new(py);
    for (key, v) in [
        ("augucb_loss", t.augucb_loss),
        ("ucbev", t.ucbev),
        ("apt", t.apt),
        ("csar", t.csar),
    ] {
        d.set_item(key, (v.value, v.vacuous))?;
    }
    d.set_item(
        "augucb_regret",
        (t.augucb_regret.value, t.augucb_regret.vacuous),
    )?;
    d.set_item("b", t.augucb_regret.b)?;
    d.set_item("warnings", t.warnings)?;
    Ok(d)
}

#[pymodule]
fn augucb_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("AugucbError", m.py().get_type::<AugucbError>())?;
    m.add("POLICIES", PolicyKind::ALL.map(PolicyKind::name).to_vec())?;
    m.add_class::<PyArm>()?;
    m.add_class::<PyInstance>()?;
    m.add_class::<PyArmStats>()?;
    m.add_class::<PyComplexity>()?;
    m.add_class::<PyPolicy>()?;
    m.add_function(wrap_pyfunction!(run_single, m)?)?;
    m.add_function(wrap_pyfunction!(run_batch, m)?)?;
    m.add_function(wrap_pyfunction!(make_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(complexity, m)?)?;
    m.add_function(wrap_pyfunction!(target_round, m)?)?;
    m.add_function(wrap_pyfunction!(regret_bound, m)?)?;
    m.add_function(wrap_pyfunction!(theoretical_bounds, m)?)?;
    Ok(())
}
