//! Python bindings: expressions, class members, vector fields, point
//! transformations and the catalog driver.

use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use wavesym::catalog;
use wavesym::deteq::is_symmetry;
use wavesym::expr::{eval, Point, ZeroConfig};
use wavesym::liealg::LieAlgebraSpan;
use wavesym::ptrans::{pushforward_theta_with, verify_admissible_with};
use wavesym::solver::{self, ExtraBasis, Mode, SolverConfig};

pyo3::create_exception!(pywavesym, WavesymError, PyException);

fn err(e: wavesym::Error) -> PyErr {
    WavesymError::new_err(e.to_string())
}

fn rational(s: &str) -> PyResult<wavesym::Rational> {
    wavesym::parse(s)
        .map_err(err)?
        .as_const()
        .cloned()
        .ok_or_else(|| WavesymError::new_err(format!("`{s}` is not a rational constant")))
}

/// A symbolic expression in t, x, u and parameters.
#[pyclass(name = "Expr", frozen, from_py_object)]
#[derive(Clone)]
struct PyExpr(wavesym::Expr);

#[pymethods]
impl PyExpr {
    #[new]
    fn new(src: &str) -> PyResult<Self> {
        wavesym::parse(src).map(PyExpr).map_err(err)
    }

    fn diff(&self, var: &str) -> PyExpr {
        PyExpr(self.0.diff(var).simplify())
    }

    fn simplify(&self) -> PyExpr {
        PyExpr(self.0.simplify())
    }

    fn subs(&self, var: &str, value: &PyExpr) -> PyExpr {
        PyExpr(self.0.subst_pairs(&[(var, value.0.clone())]).simplify())
    }

    /// Value at a point given as `{name: "p/q"}`, as a float.
    fn evaluate(&self, point: std::collections::BTreeMap<String, String>) -> PyResult<f64> {
        let pt: Point = point.iter().map(|(k, v)| Ok((k.clone(), rational(v)?))).collect::<PyResult<_>>()?;
        eval(&self.0, &pt, 50).map(|r| r.to_f64()).map_err(|e| err(e.into()))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Expr('{}')", self.0)
    }
}

/// A field `tau d_t + xi d_x + eta d_u`, or a five-component field when
/// `f` or `g` components are given.
#[pyclass(name = "VectorField", frozen, from_py_object)]
#[derive(Clone)]
struct PyField(wavesym::VectorField);

#[pymethods]
impl PyField {
    /// From `"t=expr, x=expr, u=expr"` or a generator such as `"D(x^2)"`.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        if spec.contains('=') {
            wavesym::VectorField::parse(spec).map(PyField).map_err(err)
        } else {
            catalog::combination_field(spec, &catalog::Binding::default()).map(PyField).map_err(err)
        }
    }

    fn commutator(&self, other: &PyField) -> PyResult<PyField> {
        wavesym::commutator(&self.0, &other.0).map(PyField).map_err(err)
    }

    fn spec(&self) -> String {
        self.0.spec()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("VectorField('{}')", self.0.spec())
    }
}

/// The equation `u_tt = f(x,u) u_xx + g(x,u)`.
#[pyclass(name = "ClassMember", frozen, from_py_object)]
#[derive(Clone)]
struct PyMember(wavesym::ClassMember);

#[pymethods]
impl PyMember {
    #[new]
    fn new(f: &str, g: &str) -> PyResult<Self> {
        wavesym::ClassMember::parse(f, g).map(PyMember).map_err(err)
    }

    #[getter]
    fn f(&self) -> String {
        self.0.f.to_string()
    }

    #[getter]
    fn g(&self) -> String {
        self.0.g.to_string()
    }

    fn is_symmetry(&self, field: &PyField) -> PyResult<bool> {
        is_symmetry(&field.0, &self.0).map(|r| r.holds).map_err(err)
    }

    /// Basis of the symmetry algebra within a polynomial ansatz of `degree`.
    #[pyo3(signature = (degree, mode = "exact", extra = Vec::new()))]
    fn solve(&self, py: Python<'_>, degree: usize, mode: &str, extra: Vec<String>) -> PyResult<Vec<PyField>> {
        let cfg = solver_config(mode, &extra)?;
        let sol = py.detach(|| solver::solve_symmetries(&self.0, degree, &cfg)).map_err(err)?;
        Ok(sol.span.basis.into_iter().map(PyField).collect())
    }

    #[pyo3(signature = (max_degree, mode = "exact", extra = Vec::new()))]
    fn dimension_profile(&self, py: Python<'_>, max_degree: usize, mode: &str, extra: Vec<String>) -> PyResult<Vec<usize>> {
        let cfg = solver_config(mode, &extra)?;
        py.detach(|| solver::dimension_profile(&self.0, max_degree, &cfg)).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("ClassMember(f='{}', g='{}')", self.0.f, self.0.g)
    }
}

fn solver_config(mode: &str, extra: &[String]) -> PyResult<SolverConfig> {
    let mode = match mode {
        "exact" => Mode::Exact,
        "float" => Mode::Float,
        m => return Err(WavesymError::new_err(format!("unknown mode `{m}`"))),
    };
    let extra_basis = extra
        .iter()
        .map(|e| match e.as_str() {
            "exp2t" => Ok(ExtraBasis::Exp2t),
            "trig2t" => Ok(ExtraBasis::Trig2t),
            other => Err(WavesymError::new_err(format!("unknown extra basis `{other}`"))),
        })
        .collect::<PyResult<_>>()?;
    Ok(SolverConfig { mode, extra_basis, ..SolverConfig::default() })
}

/// A point map `(t, x, u) -> (T, X, U)` with its inverse.
#[pyclass(name = "PointTransformation", frozen, from_py_object)]
#[derive(Clone)]
struct PyMap {
    map: wavesym::PointTransformation,
    cfg: ZeroConfig,
}

#[pymethods]
impl PyMap {
    /// `map` and `inverse` as `"t=expr, x=expr, u=expr"`; omitted components
    /// are the identity. `sample_scale` below 1 keeps sampling on the
    /// principal branch of arctan-based inverses.
    #[new]
    #[pyo3(signature = (map, inverse, sample_scale = "1"))]
    fn new(map: &str, inverse: &str, sample_scale: &str) -> PyResult<Self> {
        let cfg = ZeroConfig::default().with_scale(rational(sample_scale)?);
        let map = wavesym::PointTransformation::parse_spec_with_inverse(map, inverse, &cfg).map_err(err)?;
        Ok(PyMap { map, cfg })
    }

    /// Image of `theta`.
    fn pushforward(&self, theta: &PyMember) -> PyResult<PyMember> {
        let cfg = self.cfg.clone().with_chart(theta.0.chart.clone());
        pushforward_theta_with(&self.map, &theta.0, theta.0.chart.clone(), &cfg).map(PyMember).map_err(err)
    }

    /// Whether `(source, self, target)` is an admissible transformation.
    fn is_admissible(&self, source: &PyMember, target: &PyMember) -> PyResult<bool> {
        let cfg = self.cfg.clone().with_chart(source.0.chart.clone());
        verify_admissible_with(&source.0, &self.map, &target.0, &cfg).map(|r| r.holds).map_err(err)
    }

    fn pushforward_field(&self, field: &PyField) -> PyResult<PyField> {
        self.map.pushforward_field(&field.0).map(PyField).map_err(err)
    }

    fn __str__(&self) -> String {
        self.map.to_string()
    }
}

/// `(dim, derived_dim, center_dim, (positive, zero, negative))`.
#[pyfunction]
fn algebra_invariants(fields: Vec<PyField>) -> PyResult<(usize, usize, usize, (usize, usize, usize))> {
    let mut span = LieAlgebraSpan::new(fields.into_iter().map(|f| f.0).collect()).map_err(err)?;
    let inv = span.invariants().map_err(err)?;
    Ok((inv.dim, inv.derived_dim, inv.center_dim, inv.killing_signature))
}

/// Runs the catalog verification; returns the summary line and the ids of
/// failing checks.
#[pyfunction]
#[pyo3(signature = (jobs = None))]
fn verify_catalog(py: Python<'_>, jobs: Option<usize>) -> PyResult<(String, Vec<String>)> {
    let report = py.detach(|| catalog::verify_catalog(catalog::load_catalog(), jobs)).map_err(err)?;
    Ok((report.summary_line(), report.failures().iter().map(|c| c.id.clone()).collect()))
}

#[pyfunction]
fn catalog_json() -> String {
    catalog::load_catalog().to_json()
}

#[pymodule]
fn pywavesym(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("WavesymError", m.py().get_type::<WavesymError>())?;
    m.add_class::<PyExpr>()?;
    m.add_class::<PyField>()?;
    m.add_class::<PyMember>()?;
    m.add_class::<PyMap>()?;
    m.add_function(wrap_pyfunction!(algebra_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(verify_catalog, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_json, m)?)?;
    Ok(())
}
