//! Python bindings: group representations, states, test specifications,
//! exact and optimal acceptance probabilities, and variational training.
//!
//! Matrices cross the boundary as nested lists of Python `complex`.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use symtest::qmath::{self, from_rows, CMatrix, PureState};
use symtest::variational::{self, Ansatz, Optimizer, TrainConfig};
use symtest::{groups, presets, symmetry_tests, Error};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::NotConverged { .. } => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn matrix_from(rows: Vec<Vec<Complex64>>) -> PyResult<CMatrix> {
    let d = rows.len();
    if d == 0 || rows.iter().any(|r| r.len() != d) {
        return Err(PyValueError::new_err("expected a non-empty square matrix"));
    }
    Ok(from_rows(&rows))
}

fn matrix_to(m: &CMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

/// Unitary representation of a finite group.
#[pyclass(name = "GroupRep", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGroupRep {
    inner: groups::GroupRep,
}

#[pymethods]
impl PyGroupRep {
    /// Builtin representation by name, e.g. `"d3"` or `"product(z2, z2)"`.
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        Ok(Self { inner: groups::builtin(name).map_err(to_py_err)? })
    }

    #[staticmethod]
    fn builtin_names() -> Vec<&'static str> {
        groups::builtin_names().to_vec()
    }

    #[getter]
    fn name(&self) -> &str {
        &self.inner.name
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn system_qubits(&self) -> usize {
        self.inner.system_qubits
    }

    #[getter]
    fn control_qubits(&self) -> usize {
        self.inner.control_qubits
    }

    fn unitaries(&self) -> Vec<Vec<Vec<Complex64>>> {
        self.inner.unitaries.iter().map(matrix_to).collect()
    }

    /// Group projector `(1/|G|) sum_g U(g)`.
    fn projector(&self) -> PyResult<Vec<Vec<Complex64>>> {
        Ok(matrix_to(&groups::group_projector(&self.inner).map_err(to_py_err)?))
    }

    fn __repr__(&self) -> String {
        format!("GroupRep('{}', order={}, qubits={})", self.inner.name, self.inner.order(), self.inner.system_qubits)
    }
}

/// Validated density matrix.
#[pyclass(name = "DensityMatrix", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyDensityMatrix {
    inner: qmath::DensityMatrix,
}

#[pymethods]
impl PyDensityMatrix {
    /// Wraps a square matrix; fails unless it is Hermitian, PSD and unit trace.
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let inner = qmath::DensityMatrix::new(matrix_from(rows)?).map_err(|e| to_py_err(e.into()))?;
        Ok(Self { inner })
    }

    /// Named state preset, e.g. `"phi_plus"`.
    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        Ok(Self { inner: presets::state(name).map_err(to_py_err)? })
    }

    /// Projector onto a normalised pure state.
    #[staticmethod]
    fn pure(amplitudes: Vec<Complex64>) -> PyResult<Self> {
        let psi = PureState::normalized(qmath::CVector::from_vec(amplitudes)).map_err(|e| to_py_err(e.into()))?;
        Ok(Self { inner: psi.to_density() })
    }

    #[staticmethod]
    fn maximally_mixed(dim: usize) -> Self {
        Self { inner: qmath::DensityMatrix::maximally_mixed(dim) }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn purity(&self) -> f64 {
        self.inner.trace_power(2)
    }

    fn fidelity(&self, other: &PyDensityMatrix) -> PyResult<f64> {
        qmath::fidelity(&self.inner, &other.inner).map_err(|e| to_py_err(e.into()))
    }

    fn to_list(&self) -> Vec<Vec<Complex64>> {
        matrix_to(self.inner.mat())
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(dim={})", self.inner.dim())
    }
}

/// One of the four tests on a representation and an input state.
#[pyclass(name = "TestSpec", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTestSpec {
    inner: symmetry_tests::TestSpec,
}

#[pymethods]
impl PyTestSpec {
    /// `kind` is one of `bsym`, `sym`, `bse`, `symext` (or a long alias).
    #[new]
    fn new(kind: &str, group: &PyGroupRep, state: &PyDensityMatrix) -> PyResult<Self> {
        let kind = symmetry_tests::TestKind::parse(kind).map_err(to_py_err)?;
        let inner = symmetry_tests::TestSpec::new(kind, group.inner.clone(), state.inner.clone()).map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.short_name()
    }

    #[getter]
    fn system_qubits(&self) -> usize {
        self.inner.system_qubits
    }

    #[getter]
    fn extension_qubits(&self) -> usize {
        self.inner.extension_qubits
    }

    /// Qubits of the prover register with `extra` environment ancillas.
    #[pyo3(signature = (extra = 0))]
    fn prover_qubits(&self, extra: usize) -> usize {
        self.inner.prover_qubits(extra)
    }

    fn __repr__(&self) -> String {
        format!("TestSpec(kind='{}', group='{}', qubits={})", self.kind(), self.inner.rep.name, self.inner.system_qubits)
    }
}

/// Record of a training run.
#[pyclass(name = "TrainingTrace", frozen)]
struct PyTrainingTrace {
    inner: variational::TrainingTrace,
}

#[pymethods]
impl PyTrainingTrace {
    #[getter]
    fn final_objective(&self) -> f64 {
        self.inner.final_objective
    }

    #[getter]
    fn best_params(&self) -> Vec<f64> {
        self.inner.best_params.clone()
    }

    #[getter]
    fn objectives(&self) -> Vec<f64> {
        self.inner.steps.iter().map(|s| s.objective).collect()
    }

    #[getter]
    fn restart_objectives(&self) -> Vec<f64> {
        self.inner.restart_objectives.clone()
    }

    #[getter]
    fn wall_time_ms(&self) -> u128 {
        self.inner.wall_time_ms
    }

    fn to_csv(&self) -> PyResult<String> {
        self.inner.to_csv().map_err(to_py_err)
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(to_py_err)
    }
}

/// Acceptance probability `Tr[Pi rho]` of the Bose-symmetry test.
#[pyfunction]
fn bose_acceptance(group: &PyGroupRep, state: &PyDensityMatrix) -> PyResult<f64> {
    symmetry_tests::bose_acceptance(&group.inner, &state.inner).map_err(to_py_err)
}

/// Maximal acceptance probability over all provers (maximum symmetric fidelity).
#[pyfunction]
fn optimal_acceptance(py: Python<'_>, spec: &PyTestSpec) -> PyResult<f64> {
    let spec = spec.inner.clone();
    py.detach(move || symmetry_tests::optimal_acceptance(&spec)).map(|r| r.acceptance).map_err(to_py_err)
}

/// Trains a layered ansatz as prover; returns the best restart.
#[pyfunction]
#[pyo3(signature = (spec, layers = 2, extra_qubits = 0, seed = 0, max_iterations = 2000, restarts = 3, noise = None, optimizer = "finite_difference", step_size = 0.05))]
#[allow(clippy::too_many_arguments)]
fn train(
    py: Python<'_>,
    spec: &PyTestSpec,
    layers: usize,
    extra_qubits: usize,
    seed: u64,
    max_iterations: usize,
    restarts: usize,
    noise: Option<f64>,
    optimizer: &str,
    step_size: f64,
) -> PyResult<PyTrainingTrace> {
    let optimizer = match optimizer {
        "finite_difference" | "fd" => Optimizer::FiniteDifference,
        "spsa" => Optimizer::Spsa,
        other => return Err(PyValueError::new_err(format!("unknown optimizer `{other}`"))),
    };
    let cfg = TrainConfig { optimizer, step_size, max_iterations, restarts, seed, noise, ..TrainConfig::default() };
    let spec = spec.inner.clone();
    let inner = py
        .detach(move || {
            let ansatz = Ansatz::for_spec(&spec, layers, extra_qubits)?;
            variational::train(&spec, ansatz, &cfg)
        })
        .map_err(to_py_err)?;
    Ok(PyTrainingTrace { inner })
}

/// Pure-state separability test acceptance for `k` copies, with `A` the
/// leading `a_qubits` qubits of `amplitudes`.
#[pyfunction]
fn pure_separability_acceptance(amplitudes: Vec<Complex64>, a_qubits: usize, k: usize) -> PyResult<f64> {
    let psi = PureState::normalized(qmath::CVector::from_vec(amplitudes)).map_err(|e| to_py_err(e.into()))?;
    symmetry_tests::pure_separability_acceptance(&psi, a_qubits, k).map_err(to_py_err)
}

/// Names of all state presets.
#[pyfunction]
fn state_presets() -> Vec<&'static str> {
    presets::states().iter().map(|s| s.name).collect()
}

/// Reference suites as dictionaries with `name`, `table`, `group`, `kind`
/// and `rows` (`(state, reference, noiseless)` tuples).
#[pyfunction]
fn suites(py: Python<'_>) -> PyResult<Vec<Bound<'_, PyDict>>> {
    presets::suites()
        .iter()
        .map(|s| {
            let d = PyDict::new(py);
            d.set_item("name", s.name)?;
            d.set_item("table", s.table)?;
            d.set_item("group", s.group)?;
            d.set_item("kind", s.kind.short_name())?;
            let rows: Vec<(&str, f64, f64)> = s.rows.iter().map(|r| (r.state, r.reference, r.noiseless)).collect();
            d.set_item("rows", rows)?;
            Ok(d)
        })
        .collect()
}

/// Listing of groups, state presets and suites.
#[pyfunction]
fn list_presets() -> String {
    presets::listing()
}

#[pymodule]
#[pyo3(name = "symtest")]
fn symtest_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroupRep>()?;
    m.add_class::<PyDensityMatrix>()?;
    m.add_class::<PyTestSpec>()?;
    m.add_class::<PyTrainingTrace>()?;
    m.add_function(wrap_pyfunction!(bose_acceptance, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_acceptance, m)?)?;
    m.add_function(wrap_pyfunction!(train, m)?)?;
    m.add_function(wrap_pyfunction!(pure_separability_acceptance, m)?)?;
    m.add_function(wrap_pyfunction!(state_presets, m)?)?;
    m.add_function(wrap_pyfunction!(suites, m)?)?;
    m.add_function(wrap_pyfunction!(list_presets, m)?)?;
    Ok(())
}
