//! Python bindings: `import pyorbent`.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use num_complex::Complex64;
use orbent::entanglement::{
    entanglement as entanglement_of, evaluate, oracle_value, EntanglementOptions, SectorSpectrum,
};
use orbent::error::{EntanglementError, LatticeError};
use orbent::fock::json::read_state;
use orbent::fock::{Matrix16, SymmetryEigenbasis, TwoOrbitalState};
use orbent::free_fermion;
use orbent::lattice::scan::{bond_scan as scan, dimer as solve_dimer, BondScanConfig};
use orbent::lattice::SolverOptions;
use orbent::ssr::{FormulaVariant, Ssr};

create_exception!(pyorbent, InsufficientSymmetry, PyValueError);
create_exception!(pyorbent, DegenerateSector, PyValueError);
create_exception!(pyorbent, DegenerateGroundState, PyValueError);

fn entanglement_err(e: EntanglementError) -> PyErr {
    match e {
        EntanglementError::InsufficientSymmetry(_) | EntanglementError::Precondition(_) => {
            InsufficientSymmetry::new_err(e.to_string())
        }
        EntanglementError::DegenerateSector { .. } => DegenerateSector::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn lattice_err(e: LatticeError) -> PyErr {
    match e {
        LatticeError::DegenerateGroundState(_) => DegenerateGroundState::new_err(e.to_string()),
        LatticeError::Entanglement(inner) => entanglement_err(inner),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_ssr(ssr: &str) -> PyResult<Ssr> {
    ssr.parse().map_err(value_err)
}

fn to_python<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(value_err)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn state_from_parts(re: Vec<Vec<f64>>, im: Option<Vec<Vec<f64>>>) -> PyResult<TwoOrbitalState> {
    let square = |m: &Vec<Vec<f64>>| m.len() == 16 && m.iter().all(|r| r.len() == 16);
    if !square(&re) || !im.as_ref().is_none_or(square) {
        return Err(PyValueError::new_err("density matrix must be 16x16"));
    }
    let m = Matrix16::from_fn(|i, j| Complex64::new(re[i][j], im.as_ref().map_or(0.0, |im| im[i][j])));
    TwoOrbitalState::new(m).map_err(value_err)
}

fn options(tol: f64, twirl_spin: bool) -> EntanglementOptions {
    EntanglementOptions { tol, twirl_spin }
}

/// Closed-formula result for a density matrix given as real and imaginary
/// 16×16 nested lists in the occupation basis (A↑, A↓, B↑, B↓).
#[pyfunction]
#[pyo3(signature = (re, im=None, ssr="N", tol=orbent::tol::SYMMETRY, twirl_spin=false))]
fn formula(
    py: Python<'_>,
    re: Vec<Vec<f64>>,
    im: Option<Vec<Vec<f64>>>,
    ssr: &str,
    tol: f64,
    twirl_spin: bool,
) -> PyResult<Py<PyAny>> {
    let rho = state_from_parts(re, im)?;
    let result = entanglement_of(&rho, parse_ssr(ssr)?, &options(tol, twirl_spin)).map_err(entanglement_err)?;
    to_python(py, &result)
}

/// Same as `formula`, reading the density-matrix JSON document.
#[pyfunction]
#[pyo3(signature = (text, ssr="N", tol=orbent::tol::SYMMETRY, twirl_spin=false))]
fn formula_json(py: Python<'_>, text: &str, ssr: &str, tol: f64, twirl_spin: bool) -> PyResult<Py<PyAny>> {
    let rho = read_state(text).map_err(value_err)?;
    let result = entanglement_of(&rho, parse_ssr(ssr)?, &options(tol, twirl_spin)).map_err(entanglement_err)?;
    to_python(py, &result)
}

fn spectrum(p: Vec<f64>, ssr: Ssr) -> PyResult<SectorSpectrum> {
    let p: [f64; 16] = p
        .try_into()
        .map_err(|v: Vec<f64>| PyValueError::new_err(format!("expected 16 weights, got {}", v.len())))?;
    SectorSpectrum::from_weights(ssr.basis_variant(), p).map_err(entanglement_err)
}

/// Constrained KL minimum over the sixteen symmetry-basis weights.
#[pyfunction]
#[pyo3(signature = (p, ssr="N"))]
fn oracle(p: Vec<f64>, ssr: &str) -> PyResult<f64> {
    let ssr = parse_ssr(ssr)?;
    oracle_value(&spectrum(p, ssr)?, ssr).map_err(value_err)
}

/// Closed formula of one variant evaluated on symmetry-basis weights.
#[pyfunction]
fn formula_from_weights(p: Vec<f64>, variant: &str) -> PyResult<f64> {
    let variant = match variant {
        "NSSR-singlet" => FormulaVariant::NssrSinglet,
        "NSSR-general" => FormulaVariant::NssrGeneral,
        "PSSR-symmetric" => FormulaVariant::PssrSymmetric,
        "PSSR-general" => FormulaVariant::PssrGeneral,
        other => return Err(PyValueError::new_err(format!("unknown variant {other:?}"))),
    };
    let spec = spectrum(p, variant.ssr())?;
    Ok(evaluate(&spec, variant).map_err(entanglement_err)?.value)
}

/// Symmetry-basis vector `k` (zero-based) as `(re, im)` lists.
#[pyfunction]
#[pyo3(signature = (k, ssr="N"))]
fn basis_vector(k: usize, ssr: &str) -> PyResult<(Vec<f64>, Vec<f64>)> {
    if k >= 16 {
        return Err(PyValueError::new_err("index must be below 16"));
    }
    let basis = SymmetryEigenbasis::new(parse_ssr(ssr)?.basis_variant());
    let v = basis.vector(k);
    Ok((v.iter().map(|z| z.re).collect(), v.iter().map(|z| z.im).collect()))
}

#[pyfunction]
fn two_site_entanglement(eta: f64, l: usize) -> PyResult<f64> {
    free_fermion::two_site_entanglement(eta, l).map_err(value_err)
}

#[pyfunction]
#[pyo3(signature = (eta, l_cap=None))]
fn disentangling_distance(py: Python<'_>, eta: f64, l_cap: Option<usize>) -> PyResult<Py<PyAny>> {
    let d = free_fermion::disentangling_distance(eta, l_cap).map_err(value_err)?;
    to_python(py, &d)
}

#[pyfunction]
#[pyo3(signature = (u, v=0.0, t_hop=1.0))]
fn dimer(py: Python<'_>, u: f64, v: f64, t_hop: f64) -> PyResult<Py<PyAny>> {
    to_python(py, &solve_dimer(u, v, t_hop).map_err(lattice_err)?)
}

/// Strong/weak bond entanglement of a half-filled open chain for each `v`.
#[pyfunction]
#[pyo3(signature = (sites, u, vs, pivot=None, t_hop=1.0, ssr="N"))]
fn bond_scan(
    py: Python<'_>,
    sites: usize,
    u: f64,
    vs: Vec<f64>,
    pivot: Option<usize>,
    t_hop: f64,
    ssr: &str,
) -> PyResult<Py<PyAny>> {
    let config = BondScanConfig {
        sites,
        pivot: pivot.unwrap_or(sites / 2),
        t_hop,
        ssr: parse_ssr(ssr)?,
    };
    let grid: Vec<(f64, f64)> = vs.iter().map(|&v| (u, v)).collect();
    let rows = py
        .detach(|| {
            scan(
                &config,
                &grid,
                &SolverOptions::default(),
                &EntanglementOptions::default(),
            )
        })
        .map_err(lattice_err)?;
    to_python(py, &rows)
}

#[pymodule]
fn pyorbent(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("InsufficientSymmetry", m.py().get_type::<InsufficientSymmetry>())?;
    m.add("DegenerateSector", m.py().get_type::<DegenerateSector>())?;
    m.add("DegenerateGroundState", m.py().get_type::<DegenerateGroundState>())?;
    m.add_function(wrap_pyfunction!(formula, m)?)?;
    m.add_function(wrap_pyfunction!(formula_json, m)?)?;
    m.add_function(wrap_pyfunction!(formula_from_weights, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(basis_vector, m)?)?;
    m.add_function(wrap_pyfunction!(two_site_entanglement, m)?)?;
    m.add_function(wrap_pyfunction!(disentangling_distance, m)?)?;
    m.add_function(wrap_pyfunction!(dimer, m)?)?;
    m.add_function(wrap_pyfunction!(bond_scan, m)?)?;
    Ok(())
}
