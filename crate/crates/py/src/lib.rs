//! Python bindings for `divquad`.

use divquad::maps::{self, CompactifiedPoint, PhiImage};
use divquad::simplex::build_lambda as core_build_lambda;
use divquad::topology::{self, SphereProductSummand};
use divquad::variety::{self, HullCertificate};
use divquad::verify::{self, SuiteOptions};
use divquad::{AlgebraDim, AlgebraElement, Field, LambdaFrame, PointY, VarietySpec};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn dim(n: usize) -> PyResult<AlgebraDim> {
    AlgebraDim::new(n).map_err(err)
}

fn field(name: &str) -> PyResult<Field> {
    name.parse().map_err(PyValueError::new_err)
}

fn element(n: AlgebraDim, coeffs: &[f64]) -> PyResult<AlgebraElement> {
    AlgebraElement::from_slice(n, coeffs).map_err(err)
}

/// serde_json value → Python object.
fn to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(x) => match (x.as_i64(), x.as_u64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any(),
            (_, Some(u)) => u.into_pyobject(py)?.into_any(),
            _ => x.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn serialize<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &serde_json::to_value(value).map_err(err)?)
}

/// An element of ℝ, ℂ, ℍ or 𝕆.
#[pyclass(name = "Element", module = "pydivquad", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyElement(AlgebraElement);

#[pymethods]
impl PyElement {
    #[new]
    fn new(n: usize, coeffs: Vec<f64>) -> PyResult<Self> {
        Ok(PyElement(element(dim(n)?, &coeffs)?))
    }

    #[staticmethod]
    fn basis(n: usize, i: usize) -> PyResult<Self> {
        let d = dim(n)?;
        if i >= n {
            return Err(PyValueError::new_err(format!("basis index {i} out of range for n = {n}")));
        }
        Ok(PyElement(AlgebraElement::basis(d, i)))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.dim().get()
    }

    #[getter]
    fn coeffs(&self) -> Vec<f64> {
        self.0.coeffs().to_vec()
    }

    fn conj(&self) -> Self {
        PyElement(self.0.conj())
    }

    fn norm(&self) -> f64 {
        self.0.norm()
    }

    fn inner(&self, other: PyRef<'_, PyElement>) -> PyResult<f64> {
        self.0.checked_inner(&other.0).map_err(err)
    }

    fn inverse(&self) -> PyResult<Self> {
        self.0.inverse().map(PyElement).map_err(err)
    }

    fn __mul__(&self, other: PyRef<'_, PyElement>) -> PyResult<Self> {
        self.0.checked_mul(&other.0).map(PyElement).map_err(err)
    }

    fn __add__(&self, other: PyRef<'_, PyElement>) -> PyResult<Self> {
        self.same_dim(&other)?;
        Ok(PyElement(self.0 + other.0))
    }

    fn __sub__(&self, other: PyRef<'_, PyElement>) -> PyResult<Self> {
        self.same_dim(&other)?;
        Ok(PyElement(self.0 - other.0))
    }

    fn __neg__(&self) -> Self {
        PyElement(-self.0)
    }

    fn __eq__(&self, other: PyRef<'_, PyElement>) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Element({}, {:?})", self.n(), self.0.coeffs())
    }
}

impl PyElement {
    fn same_dim(&self, other: &PyElement) -> PyResult<()> {
        if self.0.dim() != other.0.dim() {
            return Err(PyValueError::new_err("elements of different algebras"));
        }
        Ok(())
    }
}

/// A point `(Z, V, W)` of the ambient space of a variety.
#[pyclass(name = "Point", module = "pydivquad", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPoint(PointY);

#[pymethods]
impl PyPoint {
    /// `z`: list of complex numbers; `v`, `w`: lists of coefficient lists.
    #[new]
    fn new(n: usize, z: Vec<Complex64>, v: Vec<Vec<f64>>, w: Vec<Vec<f64>>) -> PyResult<Self> {
        let d = dim(n)?;
        let conv = |xs: Vec<Vec<f64>>| xs.iter().map(|c| element(d, c)).collect::<PyResult<Vec<_>>>();
        Ok(PyPoint(PointY { z, v: conv(v)?, w: conv(w)? }))
    }

    #[getter]
    fn z(&self) -> Vec<Complex64> {
        self.0.z.clone()
    }

    #[getter]
    fn v(&self) -> Vec<Vec<f64>> {
        self.0.v.iter().map(|e| e.coeffs().to_vec()).collect()
    }

    #[getter]
    fn w(&self) -> Vec<Vec<f64>> {
        self.0.w.iter().map(|e| e.coeffs().to_vec()).collect()
    }

    /// Replace each `Z_k` by `|Z_k|`.
    fn folded(&self) -> Self {
        PyPoint(self.0.folded())
    }

    fn max_abs_diff(&self, other: PyRef<'_, PyPoint>) -> f64 {
        self.0.max_abs_diff(&other.0)
    }

    fn __repr__(&self) -> String {
        format!("Point(m={}, s={})", self.0.z.len(), self.0.v.len())
    }
}

/// A variety `Y(λ, s)`; `Variety.standard(n)` is the standard `Y`.
#[pyclass(name = "Variety", module = "pydivquad", frozen, skip_from_py_object)]
struct PyVariety(VarietySpec);

#[pymethods]
impl PyVariety {
    #[staticmethod]
    #[pyo3(signature = (n, field = "complex"))]
    fn standard(n: usize, field: &str) -> PyResult<Self> {
        Ok(PyVariety(VarietySpec::standard(dim(n)?, self::field(field)?)))
    }

    /// Frame given as a list of coefficient lists, each of length `n`.
    #[staticmethod]
    #[pyo3(signature = (n, frame, s = 1, field = "complex"))]
    fn general(n: usize, frame: Vec<Vec<f64>>, s: usize, field: &str) -> PyResult<Self> {
        let frame = LambdaFrame::from_rows(dim(n)?, &frame).map_err(err)?;
        VarietySpec::general(frame, s, self::field(field)?).map(PyVariety).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    #[getter]
    fn s(&self) -> usize {
        self.0.s()
    }

    #[getter]
    fn field(&self) -> &'static str {
        self.0.field().as_str()
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.0.ambient_dim()
    }

    #[getter]
    fn manifold_dim(&self) -> isize {
        self.0.manifold_dim()
    }

    #[getter]
    fn is_standard(&self) -> bool {
        self.0.is_standard()
    }

    #[getter]
    fn frame(&self) -> Vec<Vec<f64>> {
        self.0.frame().vectors().iter().map(|e| e.coeffs().to_vec()).collect()
    }

    /// Deterministic samples; releases the GIL while projecting.
    fn sample(&self, py: Python<'_>, seed: u64, count: usize) -> PyResult<Vec<PyPoint>> {
        let spec = &self.0;
        let pts = py.detach(|| variety::sample(spec, seed, count)).map_err(err)?;
        Ok(pts.into_iter().map(PyPoint).collect())
    }

    fn sample_boundary(&self, py: Python<'_>, seed: u64, count: usize) -> PyResult<Vec<PyPoint>> {
        let spec = &self.0;
        let pts = py.detach(|| variety::sample_boundary(spec, seed, count)).map_err(err)?;
        Ok(pts.into_iter().map(PyPoint).collect())
    }

    /// `(F₀, F)` at a point.
    fn residual(&self, p: PyRef<'_, PyPoint>) -> PyResult<(f64, Vec<f64>)> {
        let r = variety::eval_defining(&self.0, &p.0).map_err(err)?;
        Ok((r.f0, r.f.coeffs().to_vec()))
    }

    fn jacobian(&self, p: PyRef<'_, PyPoint>) -> PyResult<Vec<Vec<f64>>> {
        let j = variety::jacobian(&self.0, &p.0).map_err(err)?;
        Ok(j.row_iter().map(|r| r.iter().copied().collect()).collect())
    }

    #[pyo3(signature = (p, tol = 1e-10))]
    fn is_regular<'py>(&self, py: Python<'py>, p: PyRef<'_, PyPoint>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        serialize(py, &variety::is_regular(&self.0, &p.0, tol).map_err(err)?)
    }

    /// Multiply `Z_k` by `exp(i·angles[k])`.
    fn act(&self, angles: Vec<f64>, p: PyRef<'_, PyPoint>) -> PyResult<PyPoint> {
        let g = variety::TorusElement::from_angles(&angles);
        variety::act(&self.0, &g, &p.0).map(PyPoint).map_err(err)
    }

    fn lift_from_vw(&self, v: PyRef<'_, PyElement>, w: PyRef<'_, PyElement>) -> PyResult<Option<PyPoint>> {
        Ok(variety::lift_from_vw(&self.0, &v.0, &w.0).map_err(err)?.map(PyPoint))
    }

    fn predicted_type<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        serialize(py, &verify::prediction_record("variety", &self.0).map_err(err)?)
    }

    fn freeness_verdict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        serialize(py, &topology::freeness_verdict(&self.0).map_err(err)?)
    }

    fn fixed_set_prediction<'py>(&self, py: Python<'py>, fixed_circle_count: usize) -> PyResult<Bound<'py, PyAny>> {
        serialize(py, &topology::fixed_set_prediction(&self.0, fixed_circle_count).map_err(err)?)
    }

    fn verify_fixed_points<'py>(&self, py: Python<'py>, seed: u64, count: usize) -> PyResult<Bound<'py, PyAny>> {
        let spec = &self.0;
        let r = py.detach(|| topology::verify_fixed_points(spec, seed, count)).map_err(err)?;
        serialize(py, &r)
    }

    fn __repr__(&self) -> String {
        format!("Variety(n={}, m={}, s={}, field={})", self.n(), self.m(), self.s(), self.field())
    }
}

#[pyfunction]
fn build_lambda(n: usize) -> PyResult<Vec<Vec<f64>>> {
    Ok(core_build_lambda(dim(n)?).vectors().iter().map(|e| e.coeffs().to_vec()).collect())
}

/// `(z, u)` with `z` complex and `u` a list of coefficient lists.
#[pyfunction]
fn y_to_x(variety: PyRef<'_, PyVariety>, p: PyRef<'_, PyPoint>) -> PyResult<(Vec<Complex64>, Vec<Vec<f64>>)> {
    let q = maps::y_to_x(&variety.0, &p.0).map_err(err)?;
    Ok((q.z, q.u.iter().map(|e| e.coeffs().to_vec()).collect()))
}

#[pyfunction]
fn gf_relation_residual(variety: PyRef<'_, PyVariety>, p: PyRef<'_, PyPoint>) -> PyResult<f64> {
    maps::gf_relation_residual(&variety.0, &p.0).map_err(err)
}

/// `ψ(φ(p))` as `(a, b)`.
#[pyfunction]
fn psi_phi(variety: PyRef<'_, PyVariety>, p: PyRef<'_, PyPoint>) -> PyResult<(Vec<f64>, f64)> {
    let img: PhiImage = maps::phi(&variety.0, &p.0).map_err(err)?;
    let c = maps::psi(&img).map_err(err)?;
    Ok((c.a, c.b))
}

#[pyfunction]
fn inverse_psi_phi(variety: PyRef<'_, PyVariety>, a: Vec<f64>, b: f64) -> PyResult<PyPoint> {
    let c = CompactifiedPoint::new(a, b).map_err(err)?;
    maps::inverse_psi_phi(&variety.0, &c).map(PyPoint).map_err(err)
}

#[pyfunction]
fn gauge_fixed(p: PyRef<'_, PyPoint>) -> PyPoint {
    PyPoint(maps::gauge_fixed(&p.0))
}

#[pyfunction]
fn solve_pq(p: f64, q: f64) -> PyResult<(f64, f64)> {
    maps::solve_pq(p, q).map_err(err)
}

#[pyfunction]
fn hopf(v: PyRef<'_, PyElement>, w: PyRef<'_, PyElement>) -> PyResult<(PyElement, f64, f64)> {
    let prod = v.0.checked_mul(&w.0).map_err(err)?;
    Ok((PyElement(prod), v.0.norm(), w.0.norm()))
}

/// `(contains_origin, certificate)`; the certificate is a dict with either
/// `subset` and `coefficients` or a list of separating `directions`.
#[pyfunction]
fn hull_membership<'py>(
    py: Python<'py>,
    n: usize,
    vectors: Vec<Vec<f64>>,
    max_subset_size: usize,
) -> PyResult<(bool, Bound<'py, PyDict>)> {
    let d = dim(n)?;
    let vs = vectors.iter().map(|c| element(d, c)).collect::<PyResult<Vec<_>>>()?;
    let dec = variety::hull_membership(&vs, max_subset_size);
    let cert = PyDict::new(py);
    match &dec.certificate {
        HullCertificate::Contains { subset, coefficients } => {
            cert.set_item("subset", subset.clone())?;
            cert.set_item("coefficients", coefficients.clone())?;
        }
        HullCertificate::Separated { directions } => {
            cert.set_item("directions", directions.clone())?;
        }
    }
    cert.set_item("violation", dec.certificate_violation(&vs))?;
    Ok((dec.contains_origin, cert))
}

/// Betti numbers of a connected sum of `S^a × S^b` summands given as
/// `(a, b, multiplicity)` triples.
#[pyfunction]
fn connected_sum_betti(summands: Vec<(u32, u32, u64)>) -> PyResult<Vec<u64>> {
    let s: Vec<_> = summands.into_iter().map(|(a, b, k)| SphereProductSummand::new(a, b, k)).collect();
    Ok(topology::connected_sum_betti(&s).map_err(err)?.betti)
}

/// Run a verification suite (`algebra`, `simplex`, `variety`, `maps` or
/// `topology`) and return its checks as dicts.
#[pyfunction]
#[pyo3(signature = (name, seed = 0, count = None, n = None, field = "complex"))]
fn run_suite<'py>(
    py: Python<'py>,
    name: &str,
    seed: u64,
    count: Option<usize>,
    n: Option<usize>,
    field: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let dims = match n {
        Some(n) => vec![dim(n)?],
        None => AlgebraDim::ALL.to_vec(),
    };
    let opts = SuiteOptions { dims, field: self::field(field)?, seed, count, tol: None };
    let checks = py.detach(|| match name {
        "algebra" => Ok(verify::algebra_suite(&opts)),
        "simplex" => Ok(verify::simplex_suite(&opts)),
        "variety" => Ok(verify::variety_suite(&opts)),
        "maps" => Ok(verify::maps_suite(&opts)),
        "topology" => Ok(verify::topology_suite(&opts).0),
        other => Err(format!("unknown suite '{other}'")),
    });
    serialize(py, &checks.map_err(PyValueError::new_err)?)
}

#[pymodule]
fn pydivquad(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyElement>()?;
    m.add_class::<PyPoint>()?;
    m.add_class::<PyVariety>()?;
    m.add_function(wrap_pyfunction!(build_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(y_to_x, m)?)?;
    m.add_function(wrap_pyfunction!(gf_relation_residual, m)?)?;
    m.add_function(wrap_pyfunction!(psi_phi, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_psi_phi, m)?)?;
    m.add_function(wrap_pyfunction!(gauge_fixed, m)?)?;
    m.add_function(wrap_pyfunction!(solve_pq, m)?)?;
    m.add_function(wrap_pyfunction!(hopf, m)?)?;
    m.add_function(wrap_pyfunction!(hull_membership, m)?)?;
    m.add_function(wrap_pyfunction!(connected_sum_betti, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
