//! Python bindings for the mindeg permutation group engine.
//!
//! Points are 1-based on the Python side, matching the cycle notation.

use std::sync::Arc;

use mindeg::iso::{is_isomorphic as iso, IsoVerdict};
use mindeg::lattice::{subgroup_classes, LatticeOptions};
use mindeg::mu::MuEngine;
use mindeg::verify::{check_report as check, VerificationReport, Verifier};
use pyo3::create_exception;
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(pymindeg, MindegError, PyValueError);

fn err(e: mindeg::Error) -> PyErr {
    MindegError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| MindegError::new_err(e.to_string()))?;
    json_to_py(py, &text)
}

/// A permutation of `{1, ..., degree}`.
#[pyclass(name = "Perm", module = "pymindeg", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PyPerm(mindeg::Perm);

#[pymethods]
impl PyPerm {
    /// Parse cycle notation such as `"(1 2 3)(4 5)"`.
    #[new]
    fn new(cycles: &str, degree: usize) -> PyResult<Self> {
        mindeg::Perm::parse(cycles, degree).map(PyPerm).map_err(err)
    }

    /// Build from the 1-based image list `[p(1), ..., p(n)]`.
    #[staticmethod]
    fn from_images(images: Vec<usize>) -> PyResult<Self> {
        if images.contains(&0) {
            return Err(MindegError::new_err("images are 1-based"));
        }
        let zero: Vec<usize> = images.iter().map(|x| x - 1).collect();
        mindeg::Perm::from_images(&zero).map(PyPerm).map_err(err)
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    #[getter]
    fn order(&self) -> u64 {
        self.0.order()
    }

    fn images(&self) -> Vec<usize> {
        self.0.images().map(|x| x + 1).collect()
    }

    fn cycles(&self) -> Vec<Vec<usize>> {
        self.0
            .cycles()
            .into_iter()
            .map(|c| c.into_iter().map(|x| x + 1).collect())
            .collect()
    }

    fn inverse(&self) -> Self {
        PyPerm(self.0.inverse())
    }

    fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    /// The conjugate `g^-1 self g`.
    fn conj(&self, g: &PyPerm) -> PyResult<Self> {
        self.0.conjugate(&g.0).map(PyPerm).map_err(err)
    }

    /// Image of the 1-based point `x`.
    fn __call__(&self, x: usize) -> PyResult<usize> {
        if x == 0 || x > self.0.degree() {
            return Err(PyIndexError::new_err(format!("point {x} out of range")));
        }
        Ok(self.0.image(x - 1) + 1)
    }

    /// Product applying `self` first, then `other`.
    fn __mul__(&self, other: &PyPerm) -> PyResult<Self> {
        self.0.compose(&other.0).map(PyPerm).map_err(err)
    }

    fn __pow__(&self, e: i64, _modulo: Option<i64>) -> Self {
        PyPerm(self.0.pow(e))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Perm('{}', {})", self.0, self.0.degree())
    }
}

/// A permutation group with its stabilizer chain.
#[pyclass(name = "PermGroup", module = "pymindeg", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyPermGroup(mindeg::PermGroup);

#[pymethods]
impl PyPermGroup {
    #[new]
    fn new(degree: usize, generators: Vec<PyRef<'_, PyPerm>>) -> PyResult<Self> {
        let gens = generators.iter().map(|g| g.0.clone()).collect();
        mindeg::PermGroup::from_generators(degree, gens)
            .map(PyPermGroup)
            .map_err(err)
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    #[getter]
    fn order(&self) -> u128 {
        self.0.order()
    }

    fn generators(&self) -> Vec<PyPerm> {
        self.0.generators().iter().cloned().map(PyPerm).collect()
    }

    fn orbits(&self) -> Vec<Vec<usize>> {
        mindeg::actions::orbits(&self.0)
            .into_iter()
            .map(|o| o.into_iter().map(|x| x + 1).collect())
            .collect()
    }

    fn is_transitive(&self) -> bool {
        mindeg::actions::is_transitive(&self.0)
    }

    fn is_abelian(&self) -> bool {
        self.0.is_abelian()
    }

    fn is_subgroup_of(&self, other: &PyPermGroup) -> bool {
        self.0.is_subgroup_of(&other.0)
    }

    fn is_normal_in(&self, other: &PyPermGroup) -> bool {
        self.0.is_normal_in(&other.0)
    }

    fn stabilizer(&self, point: usize) -> PyResult<Self> {
        if point == 0 {
            return Err(PyIndexError::new_err("points are 1-based"));
        }
        self.0.point_stabilizer(point - 1).map(PyPermGroup).map_err(err)
    }

    fn __contains__(&self, g: &PyPerm) -> bool {
        self.0.contains(&g.0)
    }

    fn __eq__(&self, other: &PyPermGroup) -> bool {
        self.0.same_group(&other.0)
    }

    fn __len__(&self) -> PyResult<usize> {
        usize::try_from(self.0.order()).map_err(|_| MindegError::new_err("order does not fit in a machine word"))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PermGroup('{}')", self.0)
    }
}

/// Minimal faithful degree solver with a per-instance memo.
#[pyclass(name = "MuEngine", module = "pymindeg", frozen)]
pub struct PyMuEngine(Arc<MuEngine>);

#[pymethods]
impl PyMuEngine {
    #[new]
    fn new() -> Self {
        PyMuEngine(Arc::new(MuEngine::default()))
    }

    fn mu(&self, py: Python<'_>, group: &PyPermGroup) -> PyResult<usize> {
        let engine = self.0.clone();
        let g = group.0.clone();
        py.detach(move || engine.mu(&g)).map_err(err)
    }

    /// Certificate as a dict: witness classes, embedding generators and,
    /// when requested, the Wright class witness.
    #[pyo3(signature = (group, wright = false))]
    fn certificate<'py>(&self, py: Python<'py>, group: &PyPermGroup, wright: bool) -> PyResult<Bound<'py, PyAny>> {
        let engine = self.0.clone();
        let g = group.0.clone();
        let cert = py.detach(move || engine.certificate(&g, wright)).map_err(err)?;
        to_py(py, &cert)
    }

    fn in_wright_class(&self, py: Python<'_>, group: &PyPermGroup) -> PyResult<bool> {
        let engine = self.0.clone();
        let g = group.0.clone();
        py.detach(move || engine.in_wright_class(&g))
            .map(|r| r.member)
            .map_err(err)
    }
}

/// Parse a group description such as `"S4"`, `"C2 x C3"`, `"H7"` or
/// `"deg 7: (1 2 3), (1 2)(4 5 6 7)"`.
#[pyfunction]
fn parse_group(text: &str) -> PyResult<PyPermGroup> {
    mindeg::spec::parse_group(text).map(PyPermGroup).map_err(err)
}

/// Minimal faithful degree of `group`.
#[pyfunction]
fn mu(py: Python<'_>, group: &PyPermGroup) -> PyResult<usize> {
    let g = group.0.clone();
    py.detach(move || MuEngine::default().mu(&g)).map_err(err)
}

/// Centralizer of `group` in the symmetric group on its points.
#[pyfunction]
fn centralizer_in_sym(py: Python<'_>, group: &PyPermGroup) -> PyResult<PyPermGroup> {
    let g = group.0.clone();
    py.detach(move || mindeg::structure::centralizer_in_sym(&g))
        .map(PyPermGroup)
        .map_err(err)
}

/// `True`, `False`, or `None` when the search could not decide.
#[pyfunction]
fn is_isomorphic(py: Python<'_>, a: &PyPermGroup, b: &PyPermGroup) -> Option<bool> {
    let (a, b) = (a.0.clone(), b.0.clone());
    match py.detach(move || iso(&a, &b)) {
        IsoVerdict::Yes => Some(true),
        IsoVerdict::No => Some(false),
        IsoVerdict::Unresolved => None,
    }
}

/// Conjugacy classes of subgroups, summarised per class.
#[pyfunction]
fn subgroup_lattice<'py>(py: Python<'py>, group: &PyPermGroup) -> PyResult<Bound<'py, PyDict>> {
    let g = group.0.clone();
    let lattice = py
        .detach(move || subgroup_classes(&g, &LatticeOptions::default()))
        .map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("completeness", lattice.completeness.to_string())?;
    out.set_item("subgroups", lattice.subgroup_count())?;
    let mut classes = Vec::with_capacity(lattice.classes.len());
    for c in &lattice.classes {
        let d = PyDict::new(py);
        d.set_item("id", c.id)?;
        d.set_item("order", c.order)?;
        d.set_item("class_size", c.class_size)?;
        d.set_item("is_normal", c.is_normal)?;
        d.set_item("is_nilpotent", c.is_nilpotent)?;
        d.set_item("is_perfect", c.is_perfect)?;
        d.set_item("representative", PyPermGroup(c.representative.clone()))?;
        classes.push(d);
    }
    out.set_item("classes", classes)?;
    Ok(out)
}

/// Additivity sweep over the subgroup classes of Sym(degree); returns the
/// report as a dict.
#[pyfunction]
fn verify<'py>(py: Python<'py>, degree: usize) -> PyResult<Bound<'py, PyAny>> {
    let report = py
        .detach(move || Verifier::default().sweep_products(degree))
        .map_err(err)?;
    json_to_py(py, &report.to_json().map_err(err)?)
}

/// Re-verify a report produced by `verify` (given as a dict or JSON text).
#[pyfunction]
fn check_report(py: Python<'_>, report: &Bound<'_, PyAny>) -> PyResult<bool> {
    let text: String = match report.extract::<String>() {
        Ok(s) => s,
        Err(_) => py.import("json")?.call_method1("dumps", (report,))?.extract()?,
    };
    let parsed: VerificationReport =
        serde_json::from_str(&text).map_err(|e| MindegError::new_err(format!("malformed report: {e}")))?;
    Ok(py.detach(move || check(&parsed).ok()))
}

/// The degree-10 group whose product with its centralizer has minimal
/// degree 10 rather than 12.
#[pyfunction]
fn witness10<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
    let report = py.detach(|| Verifier::default().saunders_witness()).map_err(err)?;
    to_py(py, &report)
}

#[pymodule]
fn pymindeg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("MindegError", m.py().get_type::<MindegError>())?;
    m.add_class::<PyPerm>()?;
    m.add_class::<PyPermGroup>()?;
    m.add_class::<PyMuEngine>()?;
    m.add_function(wrap_pyfunction!(parse_group, m)?)?;
    m.add_function(wrap_pyfunction!(mu, m)?)?;
    m.add_function(wrap_pyfunction!(centralizer_in_sym, m)?)?;
    m.add_function(wrap_pyfunction!(is_isomorphic, m)?)?;
    m.add_function(wrap_pyfunction!(subgroup_lattice, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(check_report, m)?)?;
    m.add_function(wrap_pyfunction!(witness10, m)?)?;
    Ok(())
}
