//! Python bindings for the polycoh toolkit: polynomials, rank brackets,
//! Gowers norms, cochains with defect/correction, and the inverse-limit
//! selector.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use polycoh::budget::Budget;
use polycoh::cohomology::{
    defect as defect_of, Cochain, FiltrationKind, FiltrationTag,
};
use polycoh::corrector::{greedy_correct, minimax_correct};
use polycoh::error::Error;
use polycoh::ffpoly::{parse_poly, write_poly, FieldVector, Poly, PrimeModulus};
use polycoh::gowers::{
    delta_degree as delta_degree_of, gowers_norm, Algorithm, PhaseFunction, ValueTable,
};
use polycoh::limits::{koenig_select, InverseSystem};
use polycoh::rank::RankOracle;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A formal polynomial over F_p in the library's text format.
#[pyclass(name = "Polynomial", from_py_object)]
#[derive(Clone)]
struct Polynomial {
    inner: Poly,
}

#[pymethods]
impl Polynomial {
    /// Parse the text format "p=<p> n=<n> d=<d>\n<terms>".
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Polynomial {
            inner: parse_poly(text).map_err(err)?,
        })
    }

    fn __str__(&self) -> String {
        write_poly(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Polynomial({:?})", write_poly(&self.inner))
    }

    fn __eq__(&self, other: &Polynomial) -> bool {
        self.inner == other.inner
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.p().get()
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    fn is_homogeneous(&self) -> bool {
        self.inner.is_homogeneous()
    }

    fn eval(&self, point: Vec<u32>) -> PyResult<u32> {
        let x = FieldVector::new(self.inner.p(), point);
        self.inner.eval(&x).map_err(err)
    }

    fn add(&self, other: &Polynomial) -> PyResult<Polynomial> {
        Ok(Polynomial {
            inner: self.inner.add(&other.inner).map_err(err)?,
        })
    }

    fn sub(&self, other: &Polynomial) -> PyResult<Polynomial> {
        Ok(Polynomial {
            inner: self.inner.sub(&other.inner).map_err(err)?,
        })
    }

    fn mul(&self, other: &Polynomial) -> PyResult<Polynomial> {
        Ok(Polynomial {
            inner: self.inner.mul(&other.inner).map_err(err)?,
        })
    }

    /// P(x + h).
    fn shift(&self, h: Vec<u32>) -> PyResult<Polynomial> {
        let h = FieldVector::new(self.inner.p(), h);
        Ok(Polynomial {
            inner: self.inner.shift(&h).map_err(err)?,
        })
    }

    /// P(x + h) - P(x).
    fn delta(&self, h: Vec<u32>) -> PyResult<Polynomial> {
        let h = FieldVector::new(self.inner.p(), h);
        Ok(Polynomial {
            inner: self.inner.delta(&h).map_err(err)?,
        })
    }

    /// Zero the variables from index l on and truncate to l variables.
    fn project(&self, l: usize) -> PyResult<Polynomial> {
        Ok(Polynomial {
            inner: self.inner.project(l).map_err(err)?,
        })
    }

    /// Exact residue counts of P over the full domain.
    fn bias_counts(&self) -> PyResult<Vec<u64>> {
        Ok(self.inner.bias(&Budget::default()).map_err(err)?.counts)
    }
}

/// Certified (lower, upper) bracket on the Schmidt rank.
#[pyfunction]
#[pyo3(signature = (poly, ext_degree = 2))]
fn rank_bracket(poly: &Polynomial, ext_degree: usize) -> PyResult<(usize, usize)> {
    let mut oracle = RankOracle::new(ext_degree, Budget::default());
    oracle.bracket(&poly.inner).map_err(err)
}

/// The Gowers U^m norm of a polynomial phase; returns a dict with exact
/// counts and the derived real value.
#[pyfunction]
#[pyo3(signature = (poly, m, algorithm = "naive"))]
fn gowers<'py>(
    py: Python<'py>,
    poly: &Polynomial,
    m: usize,
    algorithm: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let algo = match algorithm {
        "naive" => Algorithm::Naive,
        "derivative" => Algorithm::Derivative,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown algorithm {other:?}"
            )))
        }
    };
    let phase = PhaseFunction::Carrier(poly.inner.clone());
    let res = gowers_norm(&phase, m, algo, &Budget::default()).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("m", res.m)?;
    out.set_item("counts", res.counts.counts.clone())?;
    out.set_item("total", res.counts.total)?;
    out.set_item("raw_power", res.raw_power())?;
    out.set_item("value", res.value)?;
    Ok(out)
}

/// Nonclassical degree of a value table F_p^n -> Z/p^k; None above max_d.
#[pyfunction]
#[pyo3(signature = (p, n, k, values, max_d = 6))]
fn delta_degree(
    p: u32,
    n: usize,
    k: u32,
    values: Vec<u32>,
    max_d: usize,
) -> PyResult<Option<usize>> {
    let prime = PrimeModulus::new(p).map_err(err)?;
    let table = ValueTable::new(prime, n, k, values).map_err(err)?;
    delta_degree_of(&table, max_d, &Budget::default()).map_err(err)
}

/// A degree-n cochain on F_p^s in the library's JSON format.
#[pyclass(name = "CochainMap", from_py_object)]
#[derive(Clone)]
struct CochainMap {
    inner: Cochain,
}

#[pymethods]
impl CochainMap {
    #[new]
    fn new(json: &str) -> PyResult<Self> {
        Ok(CochainMap {
            inner: Cochain::from_json(json).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree
    }

    fn values(&self) -> Vec<Polynomial> {
        self.inner
            .values()
            .iter()
            .map(|v| Polynomial { inner: v.clone() })
            .collect()
    }

    /// Bar differential.
    fn coboundary(&self) -> PyResult<CochainMap> {
        Ok(CochainMap {
            inner: self.inner.coboundary().map_err(err)?,
        })
    }

    /// (max_lower, max_upper) of the defect ranks under the chosen
    /// filtration ("ad" homogeneous / "bd" inhomogeneous).
    #[pyo3(signature = (filtration = "ad"))]
    fn defect(&self, filtration: &str) -> PyResult<(usize, usize)> {
        let kind = match filtration {
            "ad" => FiltrationKind::Homogeneous,
            "bd" => FiltrationKind::Inhomogeneous,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown filtration {other:?}"
                )))
            }
        };
        let tag = FiltrationTag {
            kind,
            degree: self.inner.max_value_degree(),
        };
        let mut oracle = RankOracle::new(2, Budget::default());
        let report = defect_of(&self.inner, tag, &mut oracle).map_err(err)?;
        Ok((report.max_rank_lower, report.max_rank_upper))
    }

    /// Exhaustive minimax correction; returns (images, distance).
    #[pyo3(signature = (degree = None))]
    fn correct(&self, degree: Option<usize>) -> PyResult<(Vec<Polynomial>, usize)> {
        let d = degree.unwrap_or_else(|| self.inner.max_value_degree());
        let mut oracle = RankOracle::new(2, Budget::default());
        let res = minimax_correct(&self.inner, d, &mut oracle).map_err(err)?;
        Ok((
            res.chi
                .images
                .into_iter()
                .map(|q| Polynomial { inner: q })
                .collect(),
            res.distance,
        ))
    }

    /// Seeded greedy correction; returns (images, distance).
    #[pyo3(signature = (seed = 0, degree = None))]
    fn correct_greedy(
        &self,
        seed: u64,
        degree: Option<usize>,
    ) -> PyResult<(Vec<Polynomial>, usize)> {
        let d = degree.unwrap_or_else(|| self.inner.max_value_degree());
        let mut oracle = RankOracle::new(2, Budget::default());
        let res = greedy_correct(&self.inner, d, seed, 16, 3, &mut oracle).map_err(err)?;
        Ok((
            res.chi
                .images
                .into_iter()
                .map(|q| Polynomial { inner: q })
                .collect(),
            res.distance,
        ))
    }
}

/// Select a compatible sequence (element indices per level) through a finite
/// inverse system given as labeled levels and connecting index maps.
#[pyfunction]
fn koenig(sets: Vec<Vec<String>>, maps: Vec<Vec<usize>>) -> PyResult<Vec<usize>> {
    let sys = InverseSystem::new(sets, maps).map_err(err)?;
    Ok(koenig_select(&sys).map_err(err)?.indices)
}

#[pymodule]
fn polycoh_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Polynomial>()?;
    m.add_class::<CochainMap>()?;
    m.add_function(wrap_pyfunction!(rank_bracket, m)?)?;
    m.add_function(wrap_pyfunction!(gowers, m)?)?;
    m.add_function(wrap_pyfunction!(delta_degree, m)?)?;
    m.add_function(wrap_pyfunction!(koenig, m)?)?;
    Ok(())
}
