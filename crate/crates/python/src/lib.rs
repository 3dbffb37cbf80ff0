//! Python module `husimi`: states, second moments, concurrences and the
//! Ising ground-state sweep of `husimi-core`.

use husimi_core::entanglement;
use husimi_core::hilbert::{self, SubsetMask};
use husimi_core::ising::{self, Boundary, IsingParams, SweepConfig};
use husimi_core::phase_space::{self, PhasePoint};
use husimi_core::random::{random_pure_state, stream_rng};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: husimi_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Normalized ket of `n_spins` spins 1/2; spin 1 is the most significant
/// bit of the basis index.
#[pyclass(name = "PureState", module = "husimi", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyPureState {
    inner: hilbert::PureState,
}

#[pymethods]
impl PyPureState {
    /// Amplitudes must be normalized unless `normalize` is set.
    #[new]
    #[pyo3(signature = (n_spins, amplitudes, normalize = false))]
    fn new(n_spins: usize, amplitudes: Vec<Complex64>, normalize: bool) -> PyResult<Self> {
        let inner = if normalize {
            hilbert::PureState::normalized(n_spins, amplitudes)
        } else {
            hilbert::PureState::new(n_spins, amplitudes)
        }
        .map_err(py_err)?;
        Ok(PyPureState { inner })
    }

    #[getter]
    fn n_spins(&self) -> usize {
        self.inner.n_spins()
    }

    #[getter]
    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.dim()
    }

    fn __repr__(&self) -> String {
        format!("PureState(n_spins={})", self.inner.n_spins())
    }
}

fn wrap(inner: hilbert::PureState) -> PyPureState {
    PyPureState { inner }
}

#[pyfunction]
fn ghz(n_spins: usize) -> PyResult<PyPureState> {
    hilbert::ghz(n_spins).map(wrap).map_err(py_err)
}

#[pyfunction]
fn w_state(n_spins: usize) -> PyResult<PyPureState> {
    hilbert::w_state(n_spins).map(wrap).map_err(py_err)
}

#[pyfunction]
fn bell() -> PyPureState {
    wrap(hilbert::bell())
}

#[pyfunction]
fn bell_pairs(pairs: usize) -> PyResult<PyPureState> {
    hilbert::bell_pairs(pairs).map(wrap).map_err(py_err)
}

/// Haar-random state, fixed by `seed`.
#[pyfunction]
fn random_state(n_spins: usize, seed: u64) -> PyResult<PyPureState> {
    random_pure_state(n_spins, &mut stream_rng(seed, 0)).map(wrap).map_err(py_err)
}

/// Product coherent state from per-spin `(theta, phi)` pairs.
#[pyfunction]
fn coherent_state(angles: Vec<(f64, f64)>) -> PyResult<PyPureState> {
    let point = PhasePoint::new(angles).map_err(py_err)?;
    Ok(wrap(phase_space::coherent_state(&point)))
}

/// Husimi function at per-spin angles `(theta, phi)`.
#[pyfunction(name = "husimi")]
fn husimi_value(state: &PyPureState, angles: Vec<(f64, f64)>) -> PyResult<f64> {
    let point = PhasePoint::new(angles).map_err(py_err)?;
    phase_space::husimi(&state.inner, &point).map_err(py_err)
}

/// Second moment `P` by `method` in {"purity", "projector", "quadrature",
/// "montecarlo"}; returns a dict with `value`, `method`, `stderr` and
/// `samples_or_nodes`.
#[pyfunction]
#[pyo3(signature = (state, method = "purity", samples = 1_000_000, seed = 0, nodes_theta = 3, nodes_phi = 5))]
fn second_moment<'py>(
    py: Python<'py>,
    state: &PyPureState,
    method: &str,
    samples: usize,
    seed: u64,
    nodes_theta: usize,
    nodes_phi: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let psi = &state.inner;
    let report = match method {
        "purity" => phase_space::second_moment_purity(psi),
        "projector" => phase_space::second_moment_projector(psi),
        "quadrature" => phase_space::verify_quadrature_exactness(psi, nodes_theta, nodes_phi),
        "montecarlo" => phase_space::second_moment_monte_carlo(psi, samples, seed),
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    }
    .map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("value", report.value)?;
    out.set_item("method", report.method.name())?;
    out.set_item("stderr", report.stderr)?;
    out.set_item("samples_or_nodes", report.samples_or_nodes)?;
    Ok(out)
}

/// `Tr ρ_A²` of the marginal on the given 0-based spins.
#[pyfunction]
fn subsystem_purity(state: &PyPureState, sites: Vec<usize>) -> PyResult<f64> {
    hilbert::subsystem_purity(&state.inner, SubsetMask::from_sites(&sites)).map_err(py_err)
}

#[pyfunction]
fn concurrence_two_spin(state: &PyPureState) -> PyResult<f64> {
    entanglement::concurrence_two_spin(&state.inner).map_err(py_err)
}

/// Wootters concurrence of the marginal on 0-based spins `i` and `j`.
#[pyfunction]
fn concurrence_pair(state: &PyPureState, i: usize, j: usize) -> PyResult<f64> {
    entanglement::concurrence_two_spin_pair(&state.inner, i, j).map_err(py_err)
}

#[pyfunction]
fn one_vs_rest_concurrence_sq(state: &PyPureState, site: usize) -> PyResult<f64> {
    entanglement::one_vs_rest_concurrence_sq(&state.inner, site).map_err(py_err)
}

#[pyfunction]
fn three_tangle(state: &PyPureState) -> PyResult<f64> {
    entanglement::three_tangle(&state.inner).map_err(py_err)
}

#[pyfunction]
fn multipartite_concurrence(state: &PyPureState) -> PyResult<f64> {
    entanglement::multipartite_concurrence(&state.inner).map_err(py_err)
}

#[pyfunction]
fn concurrence_vector_length_sq(state: &PyPureState) -> PyResult<f64> {
    entanglement::concurrence_vector_length_sq(&state.inner).map_err(py_err)
}

fn boundary(name: &str) -> PyResult<Boundary> {
    match name {
        "periodic" => Ok(Boundary::Periodic),
        "open" => Ok(Boundary::Open),
        other => Err(PyValueError::new_err(format!("boundary must be 'periodic' or 'open', got {other:?}"))),
    }
}

/// Ising ground state as `(energy, state, gap, degenerate)`.
#[pyfunction]
#[pyo3(signature = (n_spins, g, theta, j_coupling = 1.0, boundary_condition = "periodic"))]
fn ising_ground_state(
    n_spins: usize,
    g: f64,
    theta: f64,
    j_coupling: f64,
    boundary_condition: &str,
) -> PyResult<(f64, PyPureState, f64, bool)> {
    let params = IsingParams {
        n_spins,
        j_coupling,
        g,
        theta,
        boundary: boundary(boundary_condition)?,
    };
    let h = ising::build_hamiltonian(&params).map_err(py_err)?;
    let gs = ising::ground_state(&h).map_err(py_err)?;
    Ok((gs.energy, wrap(gs.state), gs.gap, gs.degenerate))
}

/// Ground-state sweep; one dict per `(theta, g)` with theta outer.
#[pyfunction]
#[pyo3(signature = (n_spins, g_grid, theta_list, j_coupling = 1.0, boundary_condition = "periodic"))]
fn ising_sweep<'py>(
    py: Python<'py>,
    n_spins: usize,
    g_grid: Vec<f64>,
    theta_list: Vec<f64>,
    j_coupling: f64,
    boundary_condition: &str,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let config = SweepConfig {
        template: IsingParams {
            n_spins,
            j_coupling,
            g: 0.0,
            theta: 0.0,
            boundary: boundary(boundary_condition)?,
        },
        g_grid,
        theta_list,
        spot_check_every: 0,
    };
    let records = py.detach(|| ising::sweep(&config)).map_err(py_err)?;
    records
        .into_iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("theta", r.theta)?;
            d.set_item("g", r.g)?;
            d.set_item("energy", r.energy)?;
            d.set_item("gap", r.gap)?;
            d.set_item("P", r.p)?;
            d.set_item("cN", r.c_n)?;
            d.set_item("degenerate", r.degenerate)?;
            Ok(d)
        })
        .collect()
}

#[pymodule(name = "husimi")]
fn husimi_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPureState>()?;
    m.add_function(wrap_pyfunction!(ghz, m)?)?;
    m.add_function(wrap_pyfunction!(w_state, m)?)?;
    m.add_function(wrap_pyfunction!(bell, m)?)?;
    m.add_function(wrap_pyfunction!(bell_pairs, m)?)?;
    m.add_function(wrap_pyfunction!(random_state, m)?)?;
    m.add_function(wrap_pyfunction!(coherent_state, m)?)?;
    m.add_function(wrap_pyfunction!(husimi_value, m)?)?;
    m.add_function(wrap_pyfunction!(second_moment, m)?)?;
    m.add_function(wrap_pyfunction!(subsystem_purity, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence_two_spin, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence_pair, m)?)?;
    m.add_function(wrap_pyfunction!(one_vs_rest_concurrence_sq, m)?)?;
    m.add_function(wrap_pyfunction!(three_tangle, m)?)?;
    m.add_function(wrap_pyfunction!(multipartite_concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence_vector_length_sq, m)?)?;
    m.add_function(wrap_pyfunction!(ising_ground_state, m)?)?;
    m.add_function(wrap_pyfunction!(ising_sweep, m)?)?;
    Ok(())
}
