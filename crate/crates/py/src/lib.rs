//! Python bindings. Fields cross the boundary as flat lists of Python
//! `complex` in FFT order (first axis slowest).

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use std::path::PathBuf;
use wkg_core::config::RunConfig;
use wkg_core::diagnostics::{energy_kg, energy_wave, z_norm_kg, z_norm_wave};
use wkg_core::radial::run_radial_model;
use wkg_core::scattering::{check_resonance_bounds, renormalize_profile, u_low_eval, wave_spectrum};
use wkg_core::system::{make_initial_data, CouplingCoefficients, ProfileState};
use wkg_core::{Channel, DyadicParams, WkgError};

fn err(e: WkgError) -> PyErr {
    match e {
        WkgError::Numerical { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn config_from(toml: Option<&str>) -> PyResult<RunConfig> {
    match toml {
        Some(t) => RunConfig::from_toml(t).map_err(err),
        None => Ok(RunConfig::default()),
    }
}

fn coefficients(name: &str) -> PyResult<CouplingCoefficients> {
    match name {
        "model" => Ok(CouplingCoefficients::model()),
        "zero" => Ok(CouplingCoefficients::zero()),
        other => Err(PyValueError::new_err(format!("unknown coefficients {other:?}; use \"model\" or \"zero\""))),
    }
}

/// Periodic grid with `n` points per axis on a box of side `box_length`.
#[pyclass(name = "Grid", module = "wkg", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGrid {
    inner: wkg_core::SpectralGrid,
}

#[pymethods]
impl PyGrid {
    #[new]
    #[pyo3(signature = (n, box_length, dim = 3))]
    fn new(n: usize, box_length: f64, dim: usize) -> PyResult<Self> {
        Ok(PyGrid { inner: wkg_core::SpectralGrid::new(dim, n, box_length).map_err(err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn box_length(&self) -> f64 {
        self.inner.box_length()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn wavevector(&self, index: usize) -> PyResult<[f64; 3]> {
        if index >= self.inner.len() {
            return Err(PyValueError::new_err("mode index out of range"));
        }
        Ok(self.inner.wavevector(index))
    }

    /// Transform of real samples (FFT order) to `f̂`.
    fn forward_real(&self, samples: Vec<f64>) -> PyResult<Vec<Complex64>> {
        if samples.len() != self.inner.len() {
            return Err(PyValueError::new_err("sample count does not match the grid"));
        }
        Ok(self.inner.forward_real(&samples))
    }

    fn inverse_real(&self, spectrum: Vec<Complex64>) -> PyResult<Vec<f64>> {
        if spectrum.len() != self.inner.len() {
            return Err(PyValueError::new_err("mode count does not match the grid"));
        }
        Ok(self.inner.inverse_real(&spectrum))
    }

    fn __repr__(&self) -> String {
        format!("Grid(n={}, box_length={}, dim={})", self.inner.n(), self.inner.box_length(), self.inner.dim())
    }
}

/// Profiles `V^wa`, `V^kg` at time `t`.
#[pyclass(name = "State", module = "wkg", skip_from_py_object)]
#[derive(Clone)]
struct PyState {
    inner: ProfileState,
}

#[pymethods]
impl PyState {
    #[getter]
    fn t(&self) -> f64 {
        self.inner.t
    }

    #[getter]
    fn v_wa(&self) -> Vec<Complex64> {
        self.inner.v_wa.clone()
    }

    #[getter]
    fn v_kg(&self) -> Vec<Complex64> {
        self.inner.v_kg.clone()
    }

    /// Physical `(u, u_t, v, v_t)` as real lists.
    fn physical(&self, grid: &PyGrid) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
        let p = self.inner.physical(&grid.inner);
        (p.u, p.u_t, p.v, p.v_t)
    }
}

/// The reference initial data of the default configuration, scaled by `eps0`.
#[pyfunction]
#[pyo3(signature = (grid, eps0, config = None))]
fn initial_state(grid: &PyGrid, eps0: f64, config: Option<&str>) -> PyResult<PyState> {
    let cfg = config_from(config)?;
    let data = make_initial_data(&grid.inner, &cfg.initial, eps0, &cfg.params).map_err(err)?;
    Ok(PyState { inner: data.state })
}

/// Fourth-order Runge-Kutta stepper for the profile system.
#[pyclass(name = "Solver", module = "wkg", frozen)]
struct PySolver {
    inner: wkg_core::system::Solver,
}

#[pymethods]
impl PySolver {
    #[new]
    #[pyo3(signature = (grid, coefficients = "model"))]
    fn new(grid: &PyGrid, coefficients: &str) -> PyResult<Self> {
        let c = self::coefficients(coefficients)?;
        Ok(PySolver { inner: wkg_core::system::Solver::new(grid.inner.clone(), c).map_err(err)? })
    }

    fn step(&self, state: &PyState, dt: f64) -> PyResult<PyState> {
        Ok(PyState { inner: self.inner.step(&state.inner, dt).map_err(err)? })
    }

    fn advance(&self, state: &PyState, dt: f64, steps: usize) -> PyResult<PyState> {
        Ok(PyState { inner: self.inner.advance(&state.inner, dt, steps).map_err(err)? })
    }
}

/// `{"z_wa", "z_kg", "e_wa", "e_kg"}` with default dyadic parameters.
#[pyfunction]
fn norms<'py>(py: Python<'py>, grid: &PyGrid, state: &PyState) -> PyResult<Bound<'py, PyDict>> {
    let p = DyadicParams::default();
    let g = &grid.inner;
    let d = PyDict::new(py);
    d.set_item("z_wa", z_norm_wave(g, &state.inner.v_wa, &p))?;
    d.set_item("z_kg", z_norm_kg(g, &state.inner.v_kg, &p))?;
    d.set_item("e_wa", energy_wave(g, &state.inner, &p))?;
    d.set_item("e_kg", energy_kg(g, &state.inner, &CouplingCoefficients::model(), &p).value())?;
    Ok(d)
}

#[pyfunction]
fn lambda_kg(xi: [f64; 3]) -> f64 {
    Channel::KleinGordon.lambda(&xi)
}

#[pyfunction]
fn lambda_wave(xi: [f64; 3]) -> f64 {
    Channel::Wave.lambda(&xi)
}

/// Low-frequency wave field `u_low(x, s)` of `state` at the given points.
#[pyfunction]
#[pyo3(signature = (grid, state, s, points, p = None))]
fn u_low(grid: &PyGrid, state: &PyState, s: f64, points: Vec<[f64; 3]>, p: Option<f64>) -> Vec<f64> {
    let u_hat = wave_spectrum(&grid.inner, &state.inner);
    u_low_eval(&grid.inner, &u_hat, s, &points, p.unwrap_or(DyadicParams::default().p))
}

#[pyfunction]
fn renormalize(v_kg: Vec<Complex64>, theta: Vec<f64>) -> PyResult<Vec<Complex64>> {
    if v_kg.len() != theta.len() {
        return Err(PyValueError::new_err("profile and phase differ in length"));
    }
    Ok(renormalize_profile(&v_kg, &theta))
}

/// Runs a simulation from a TOML configuration. Returns the diagnostics
/// table; writes the usual output files when `out` is given.
#[pyfunction]
#[pyo3(signature = (config = None, out = None))]
fn simulate<'py>(py: Python<'py>, config: Option<&str>, out: Option<PathBuf>) -> PyResult<Bound<'py, PyDict>> {
    let cfg = config_from(config)?;
    let outcome = wkg_core::run::simulate(&cfg).map_err(err)?;
    if let Some(dir) = out {
        wkg_core::run::write_outputs(&cfg, &outcome, &dir).map_err(err)?;
    }
    let d = PyDict::new(py);
    d.set_item("times", outcome.series.times.clone())?;
    d.set_item("columns", outcome.series.columns.clone())?;
    d.set_item("rows", outcome.series.rows.clone())?;
    d.set_item("final_state", PyState { inner: outcome.final_state })?;
    d.set_item("max_modulus_defect", outcome.report.max_modulus_defect)?;
    Ok(d)
}

/// Fitted linear decay exponents `(wave, kg)`.
#[pyfunction]
#[pyo3(signature = (config = None))]
fn decay_exponents(config: Option<&str>) -> PyResult<(f64, f64)> {
    let cfg = config_from(config)?;
    let rep = wkg_core::run::decay_linear(&cfg).map_err(err)?;
    Ok((rep.wave.fit.exponent, rep.kg.fit.exponent))
}

/// Number of phase-bound violations in `samples` draws at scale `b`.
#[pyfunction]
#[pyo3(signature = (b, samples, seed = 0))]
fn resonance_violations(b: f64, samples: u64, seed: u64) -> PyResult<u64> {
    Ok(check_resonance_bounds(b, samples, seed).map_err(err)?.violations())
}

/// `(times, light_cone_min)` of the radial model.
#[pyfunction]
#[pyo3(signature = (config = None))]
fn radial(config: Option<&str>) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let cfg = config_from(config)?;
    let s = run_radial_model(&cfg.radial).map_err(err)?;
    Ok((s.times, s.light_cone_min))
}

#[pyfunction]
fn default_config() -> PyResult<String> {
    RunConfig::default().to_toml().map_err(err)
}

#[pymodule]
fn wkg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrid>()?;
    m.add_class::<PyState>()?;
    m.add_class::<PySolver>()?;
    m.add_function(wrap_pyfunction!(initial_state, m)?)?;
    m.add_function(wrap_pyfunction!(norms, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_kg, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_wave, m)?)?;
    m.add_function(wrap_pyfunction!(u_low, m)?)?;
    m.add_function(wrap_pyfunction!(renormalize, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(decay_exponents, m)?)?;
    m.add_function(wrap_pyfunction!(resonance_violations, m)?)?;
    m.add_function(wrap_pyfunction!(radial, m)?)?;
    m.add_function(wrap_pyfunction!(default_config, m)?)?;
    Ok(())
}
