//! Python bindings. Matrices cross the boundary as nested lists of complex
//! numbers, reports and configs as JSON text.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use nvholo_core::analysis::{build_gate_report, GateModel, GateScenario};
use nvholo_core::linalg::ComplexMatrix;
use nvholo_core::model::{self, FourLevelParams};
use nvholo_core::pulse::{self, PulseSchedule};
use nvholo_core::scenario::{to_json, RunOptions, ScenarioConfig, Verb};
use nvholo_core::TimeGrid;

type Rows = Vec<Vec<Complex64>>;
/// `(passed, files, check_lines)` from a verb run.
type RunResult = (bool, Vec<(String, String)>, Vec<String>);

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_matrix(rows: Rows) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(&rows).map_err(value_err)
}

fn verb(name: &str) -> PyResult<Verb> {
    Verb::ALL
        .into_iter()
        .find(|v| v.name() == name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown verb {name:?}")))
}

/// Pulse schedule for the holonomic loop.
#[pyclass(name = "PulseSchedule", module = "nvholo", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySchedule {
    inner: PulseSchedule,
}

#[pymethods]
impl PySchedule {
    #[staticmethod]
    #[pyo3(signature = (chi, phi, omega0, alpha))]
    fn designed(chi: f64, phi: f64, omega0: f64, alpha: f64) -> Self {
        Self {
            inner: PulseSchedule::designed(chi, phi, omega0, alpha),
        }
    }

    #[staticmethod]
    #[pyo3(signature = (omega0, pump, stokes))]
    fn gaussian_stirap(omega0: f64, pump: (f64, f64, f64), stokes: (f64, f64, f64)) -> Self {
        let g = |(amplitude, center, width): (f64, f64, f64)| pulse::GaussianPulse {
            amplitude,
            center,
            width,
        };
        Self {
            inner: PulseSchedule::gaussian_stirap(omega0, g(pump), g(stokes)),
        }
    }

    #[getter]
    fn chi(&self) -> f64 {
        self.inner.chi
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.inner.phi
    }

    #[getter]
    fn omega0(&self) -> f64 {
        self.inner.omega0
    }

    fn default_window(&self) -> (f64, f64) {
        self.inner.default_window()
    }

    /// `(Ω, χ, ψ)` at `t`.
    fn drive(&self, t: f64) -> (f64, f64, f64) {
        let d = self.inner.drive(t);
        (d.omega, d.chi, d.psi)
    }

    /// Complex pump and Stokes Rabi frequencies at `t`.
    fn pump_stokes(&self, t: f64) -> (Complex64, Complex64) {
        pulse::pump_stokes(t, &self.inner)
    }

    /// Solid-angle gate phase over `[t0, tf]`, defaulting to the schedule window.
    #[pyo3(signature = (samples = pulse::DEFAULT_PATH_SAMPLES, t0 = None, tf = None))]
    fn geometric_phase(&self, samples: usize, t0: Option<f64>, tf: Option<f64>) -> PyResult<f64> {
        let (w0, w1) = self.inner.default_window();
        let grid = TimeGrid::new(t0.unwrap_or(w0), tf.unwrap_or(w1), samples.saturating_sub(1)).map_err(value_err)?;
        let path = pulse::path_angles(&self.inner, &grid).map_err(value_err)?;
        Ok(pulse::geometric_phase(&path).map_err(value_err)?.gamma)
    }

    /// Gate report JSON for the four-level model on `steps` steps.
    #[pyo3(signature = (steps, t0 = None, tf = None))]
    fn gate_report(&self, steps: usize, t0: Option<f64>, tf: Option<f64>) -> PyResult<String> {
        let (w0, w1) = self.inner.default_window();
        let grid = TimeGrid::new(t0.unwrap_or(w0), tf.unwrap_or(w1), steps).map_err(value_err)?;
        let params = FourLevelParams::dark_regime(self.inner.clone());
        let sc = GateScenario::new("python", GateModel::FourLevel(params), grid);
        let report = build_gate_report(&sc).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        Ok(to_json(&report))
    }

    fn __repr__(&self) -> String {
        format!(
            "PulseSchedule(chi={}, phi={}, omega0={}, alpha={})",
            self.inner.chi, self.inner.phi, self.inner.omega0, self.inner.alpha
        )
    }
}

/// Target rotation by `gamma` about the axis set by `(chi, phi)`.
#[pyfunction]
fn ideal_gate(chi: f64, phi: f64, gamma: f64) -> Rows {
    model::ideal_gate(chi, phi, gamma).rows()
}

/// `|Tr(A†B)| / 2` for 2×2 gates.
#[pyfunction]
fn operator_fidelity(ideal: Rows, actual: Rows) -> PyResult<f64> {
    let (a, b) = (to_matrix(ideal)?, to_matrix(actual)?);
    if a.dim() != 2 || b.dim() != 2 {
        return Err(PyValueError::new_err("operator_fidelity needs 2x2 matrices"));
    }
    Ok(nvholo_core::analysis::operator_fidelity(&a, &b))
}

/// `exp(-i H dt)` for Hermitian `H`.
#[pyfunction]
fn hermitian_exp(h: Rows, dt: f64) -> PyResult<Rows> {
    let h = to_matrix(h)?;
    Ok(nvholo_core::linalg::hermitian_exp(&h, dt).map_err(value_err)?.rows())
}

/// Ramp angle of the designed loop.
#[pyfunction]
fn eta(t: f64, alpha: f64) -> f64 {
    pulse::eta(t, alpha)
}

/// Dark states `(D1, D2)` for the given Rabi frequencies.
#[pyfunction]
fn dark_states(pump: Complex64, stokes: Complex64, omega0: f64) -> PyResult<(Vec<Complex64>, Vec<Complex64>)> {
    let (d1, d2) = model::dark_states(pump, stokes, omega0).map_err(value_err)?;
    Ok((d1.amplitudes().to_vec(), d2.amplitudes().to_vec()))
}

/// Committed default config for a CLI verb, as JSON text.
#[pyfunction]
fn default_config(verb_name: &str) -> PyResult<String> {
    Ok(verb(verb_name)?.default_config_text().to_string())
}

/// Runs a CLI verb in memory. Returns `(passed, files, check_lines)` with
/// `files` mapping output names to their contents.
#[pyfunction]
#[pyo3(signature = (verb_name, config = None, steps = None, seed = 0))]
fn run(
    py: Python<'_>,
    verb_name: &str,
    config: Option<&str>,
    steps: Option<usize>,
    seed: u64,
) -> PyResult<RunResult> {
    let v = verb(verb_name)?;
    let cfg = match config {
        Some(text) => ScenarioConfig::from_json(text).map_err(value_err)?,
        None => v.default_config(),
    };
    let opts = RunOptions { steps, seed };
    let out = py
        .detach(|| v.run(&cfg, &opts))
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    let lines = out.checks.iter().map(|c| c.line()).collect();
    Ok((out.passed(), out.files.clone(), lines))
}

#[pymodule]
fn nvholo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySchedule>()?;
    m.add_function(wrap_pyfunction!(ideal_gate, m)?)?;
    m.add_function(wrap_pyfunction!(operator_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(hermitian_exp, m)?)?;
    m.add_function(wrap_pyfunction!(eta, m)?)?;
    m.add_function(wrap_pyfunction!(dark_states, m)?)?;
    m.add_function(wrap_pyfunction!(default_config, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
