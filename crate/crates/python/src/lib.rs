//! Python bindings: semigroups, bands, matchings, transformation monoids
//! and the colour alignment solver.

// pyo3 0.22 macros trip this lint on every `PyResult` signature.
#![allow(clippy::useless_conversion)]

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use semimatch::band::{self, ZeroRectBand};
use semimatch::colour::{self, Ball, ColourInstance, SolveOutcome};
use semimatch::matching::{self, PermutationMatching};
use semimatch::semigroup::{self, FiniteSemigroup};
use semimatch::transform::{self, Family};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<PyObject> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_py(py),
        Value::Number(n) => match n.as_u64() {
            Some(u) => u.into_py(py),
            None => n.as_f64().unwrap_or(f64::NAN).into_py(py),
        },
        Value::String(s) => s.into_py(py),
        Value::Array(a) => PyList::new_bound(py, a.iter().map(|x| to_py(py, x)).collect::<PyResult<Vec<_>>>()?).into_py(py),
        Value::Object(o) => {
            let d = PyDict::new_bound(py);
            for (k, x) in o {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_py(py)
        }
    })
}

/// A finite semigroup given by its Cayley table.
#[pyclass(name = "Semigroup", module = "semimatch_py")]
#[derive(Clone)]
struct PySemigroup {
    inner: FiniteSemigroup,
}

#[pymethods]
impl PySemigroup {
    #[new]
    #[pyo3(signature = (table, labels=None))]
    fn new(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> PyResult<Self> {
        Ok(Self { inner: FiniteSemigroup::new(table, labels).map_err(value_error)? })
    }

    /// Parses the Cayley table text format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Self { inner: semigroup::parse_cayley(text).map_err(value_error)? })
    }

    fn to_text(&self) -> String {
        semigroup::write_cayley(&self.inner)
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    fn mul(&self, a: usize, b: usize) -> PyResult<usize> {
        if a >= self.inner.order() || b >= self.inner.order() {
            return Err(value_error("element out of range"));
        }
        Ok(self.inner.mul(a, b))
    }

    fn label(&self, a: usize) -> String {
        self.inner.label(a)
    }

    fn inverses(&self, a: usize) -> Vec<usize> {
        self.inner.inverses_of(a)
    }

    fn is_regular(&self) -> bool {
        self.inner.is_regular()
    }

    fn idempotents(&self) -> Vec<usize> {
        self.inner.idempotents()
    }

    /// Structural flags as a dict.
    fn structure(&self, py: Python<'_>) -> PyResult<PyObject> {
        let v = serde_json::to_value(semigroup::structure_report(&self.inner)).map_err(value_error)?;
        to_py(py, &v)
    }

    /// D-classes as lists of elements.
    fn d_classes(&self) -> Vec<Vec<usize>> {
        self.inner.green_relations().d_classes().iter().map(|d| d.elements.clone()).collect()
    }

    fn __repr__(&self) -> String {
        format!("Semigroup(order={})", self.inner.order())
    }
}

/// A 0-rectangular band given by its idempotent pattern.
#[pyclass(name = "Band", module = "semimatch_py")]
#[derive(Clone)]
struct PyBand {
    inner: ZeroRectBand,
}

#[pymethods]
impl PyBand {
    /// `pattern` is a list of strings of `0`/`1` or a list of lists of bools.
    #[new]
    fn new(pattern: &Bound<'_, PyAny>) -> PyResult<Self> {
        let rows: Vec<Vec<bool>> = if let Ok(strings) = pattern.extract::<Vec<String>>() {
            strings
                .iter()
                .map(|r| {
                    r.chars()
                        .map(|c| match c {
                            '0' => Ok(false),
                            '1' => Ok(true),
                            _ => Err(value_error(format!("bad pattern character {c:?}"))),
                        })
                        .collect()
                })
                .collect::<PyResult<_>>()?
        } else {
            pattern.extract()?
        };
        Ok(Self { inner: ZeroRectBand::new(rows).map_err(value_error)? })
    }

    /// The 7-element orthodox band without a permutation matching.
    #[staticmethod]
    fn b7() -> Self {
        Self { inner: band::builtin_b7() }
    }

    #[staticmethod]
    fn random(rows: usize, cols: usize, density: f64, seed: u64) -> PyResult<Self> {
        Ok(Self { inner: band::random_band(rows, cols, density, seed).map_err(value_error)? })
    }

    #[getter]
    fn rows(&self) -> usize {
        self.inner.rows()
    }

    #[getter]
    fn cols(&self) -> usize {
        self.inner.cols()
    }

    fn pattern(&self) -> Vec<Vec<bool>> {
        self.inner.pattern().to_vec()
    }

    /// Index of `(i, j)` in the semigroup (0-based coordinates).
    fn element(&self, i: usize, j: usize) -> usize {
        self.inner.element(i, j)
    }

    fn semigroup(&self) -> PySemigroup {
        PySemigroup { inner: self.inner.to_semigroup() }
    }

    fn row_column_condition(&self) -> PyResult<bool> {
        Ok(self.inner.row_column_condition().map_err(value_error)?.holds)
    }

    /// The maps `π_t` as lists, or `None`.
    fn harem_functions(&self) -> PyResult<Option<Vec<Vec<usize>>>> {
        Ok(self.inner.harem_functions().map_err(value_error)?.map(|h| h.maps))
    }

    fn harem_involution(&self) -> PyResult<Option<Vec<usize>>> {
        Ok(self.inner.harem_involution().map_err(value_error)?.map(|h| h.matching.images().to_vec()))
    }

    fn __repr__(&self) -> String {
        format!("Band({}x{})", self.inner.rows(), self.inner.cols())
    }
}

#[pyfunction]
fn find_permutation_matching(s: &PySemigroup) -> PyResult<Option<Vec<usize>>> {
    Ok(matching::find_permutation_matching(&s.inner).map_err(value_error)?.map(PermutationMatching::into_images))
}

/// `(A, V(A))` with `|A| > |V(A)|`, or `None` when a matching exists.
#[pyfunction]
fn hall_violator(s: &PySemigroup) -> PyResult<Option<(Vec<usize>, Vec<usize>)>> {
    Ok(matching::hall_violator(&s.inner).map_err(value_error)?.map(|v| (v.subset, v.image)))
}

#[pyfunction]
fn find_involution_matching(s: &PySemigroup) -> PyResult<Option<Vec<usize>>> {
    Ok(matching::find_involution_matching(&s.inner).map_err(value_error)?.map(|i| i.images().to_vec()))
}

#[pyfunction]
fn verify_permutation_matching(s: &PySemigroup, images: Vec<usize>) -> PyResult<bool> {
    matching::verify_permutation_matching(&s.inner, &images).map_err(value_error)
}

#[pyfunction]
fn verify_involution_matching(s: &PySemigroup, images: Vec<usize>) -> PyResult<bool> {
    matching::verify_involution_matching(&s.inner, &images).map_err(value_error)
}

/// The six equivalent matching verdicts, cross-checked.
#[pyfunction]
fn equivalence_verdicts(s: &PySemigroup) -> PyResult<Vec<bool>> {
    Ok(matching::equivalence_report(&s.inner).map_err(value_error)?.verdicts.to_vec())
}

/// `(semigroup, images)` where `images[k]` is the image sequence of element
/// `k`, with `None` for undefined points.
#[pyfunction]
#[pyo3(signature = (family, n, cap=transform::DEFAULT_CAP))]
fn enumerate_family(family: &str, n: usize, cap: usize) -> PyResult<(PySemigroup, Vec<Vec<Option<u8>>>)> {
    let family: Family = family.parse().map_err(value_error)?;
    if n == 0 || n > 16 {
        return Err(value_error("degree must be between 1 and 16"));
    }
    let tm = transform::enumerate(family, n, cap).map_err(value_error)?;
    let images = tm
        .elements
        .iter()
        .map(|t| t.images().iter().map(|&x| (x != transform::UNDEFINED).then_some(x)).collect())
        .collect();
    Ok((PySemigroup { inner: tm.semigroup }, images))
}

/// A matching of `T_n` assembled from its Q-classes.
#[pyfunction]
fn full_transformation_matching(n: usize) -> PyResult<Vec<usize>> {
    if n == 0 || n > 6 {
        return Err(value_error("degree must be between 1 and 6"));
    }
    let tm = transform::enumerate(Family::Tn, n, usize::MAX).map_err(value_error)?;
    Ok(transform::tn_matching_via_q_classes(&tm).map_err(value_error)?.matching.into_images())
}

/// Solves a colour alignment instance given as `(girl, colour)` pairs.
/// Returns a dict with `status` and, when solved, the ball `pairing`.
#[pyfunction]
#[pyo3(signature = (girls, colours, balls, budget=None))]
fn colour_solve(py: Python<'_>, girls: usize, colours: usize, balls: Vec<(usize, usize)>, budget: Option<u64>) -> PyResult<PyObject> {
    let balls = balls.into_iter().map(|(girl, colour)| Ball { girl, colour }).collect();
    let inst = ColourInstance::new(girls, colours, balls).map_err(value_error)?;
    let outcome = colour::solve(&inst, budget);
    let v = serde_json::to_value(&outcome).map_err(value_error)?;
    to_py(py, &v)
}

/// Colour alignment route from a band matching to an involution matching;
/// `None` when the derived instance has no plan.
#[pyfunction]
#[pyo3(signature = (band, images, budget=None))]
fn colour_reduce(band: &PyBand, images: Vec<usize>, budget: Option<u64>) -> PyResult<Option<Vec<usize>>> {
    let phi = PermutationMatching::new(images).map_err(value_error)?;
    let inst = colour::instance_from_matching(&band.inner, &phi).map_err(value_error)?;
    match colour::solve(&inst, budget) {
        SolveOutcome::Solved { plan, .. } => {
            let inv = colour::involution_from_plan(&band.inner, &phi, &inst, &plan).map_err(value_error)?;
            Ok(Some(inv.images().to_vec()))
        }
        SolveOutcome::Unsolvable { .. } => Ok(None),
        SolveOutcome::BudgetExhausted { nodes } => Err(value_error(format!("budget exhausted after {nodes} nodes"))),
    }
}

#[pymodule]
fn semimatch_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySemigroup>()?;
    m.add_class::<PyBand>()?;
    m.add_function(wrap_pyfunction!(find_permutation_matching, m)?)?;
    m.add_function(wrap_pyfunction!(hall_violator, m)?)?;
    m.add_function(wrap_pyfunction!(find_involution_matching, m)?)?;
    m.add_function(wrap_pyfunction!(verify_permutation_matching, m)?)?;
    m.add_function(wrap_pyfunction!(verify_involution_matching, m)?)?;
    m.add_function(wrap_pyfunction!(equivalence_verdicts, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_family, m)?)?;
    m.add_function(wrap_pyfunction!(full_transformation_matching, m)?)?;
    m.add_function(wrap_pyfunction!(colour_solve, m)?)?;
    m.add_function(wrap_pyfunction!(colour_reduce, m)?)?;
    Ok(())
}
