//! Python bindings: model spaces, curvature checks, root searches and foliation trajectories.
//!
//! Structured results cross the boundary as plain dicts and lists.

use kappamu::biharmonic::{self, AntiInvariantSurface, LegendreCurve, Submanifold};
use kappamu::checks::{random_points, run_checks, Tolerances};
use kappamu::foliation::{self, Branch, FoliationParams};
use kappamu::tensor::{audit_identities, extract_kappa_mu, scalar_curvature};
use kappamu::{Interval, LambdaFamily, Point, SignChoice};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: kappamu::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn sign(s: &str) -> PyResult<SignChoice> {
    match s {
        "plus" | "+" => Ok(SignChoice::Plus),
        "minus" | "-" => Ok(SignChoice::Minus),
        _ => Err(PyValueError::new_err(format!("sign must be 'plus' or 'minus', got {s:?}"))),
    }
}

fn which(s: &str) -> PyResult<Submanifold> {
    match s {
        "curve" => Ok(Submanifold::Curve),
        "surface" => Ok(Submanifold::Surface),
        _ => Err(PyValueError::new_err(format!("which must be 'curve' or 'surface', got {s:?}"))),
    }
}

/// A model space `M(1 − λ², 2(1 ± λ))` for one generating function `λ(z)`.
#[pyclass(name = "ModelSpace", frozen)]
struct PyModelSpace {
    inner: kappamu::ModelSpace,
}

impl PyModelSpace {
    fn build(family: kappamu::Result<LambdaFamily>, s: &str) -> PyResult<Self> {
        Ok(Self { inner: kappamu::ModelSpace::new(family.map_err(err)?, sign(s)?) })
    }
}

#[pymethods]
impl PyModelSpace {
    /// `λ = z^{-n}` on `(0, 12)`.
    #[staticmethod]
    #[pyo3(signature = (n, sign = "plus"))]
    fn power(n: f64, sign: &str) -> PyResult<Self> {
        Self::build(LambdaFamily::power(n), sign)
    }

    /// `λ = √(1 − a z − b)` on a width-12 interval ending where the radicand vanishes.
    #[staticmethod]
    #[pyo3(signature = (a, b, sign = "plus"))]
    fn sqrt_linear(a: f64, b: f64, sign: &str) -> PyResult<Self> {
        Self::build(LambdaFamily::sqrt_linear(a, b), sign)
    }

    #[staticmethod]
    #[pyo3(signature = (value, sign = "plus"))]
    fn constant(value: f64, sign: &str) -> PyResult<Self> {
        Self::build(LambdaFamily::constant(value), sign)
    }

    #[getter]
    fn domain(&self) -> (f64, f64) {
        (self.inner.family.domain.lo, self.inner.family.domain.hi)
    }

    #[getter]
    fn sign(&self) -> &'static str {
        self.inner.sign.name()
    }

    fn __repr__(&self) -> String {
        format!("ModelSpace({}, {})", self.inner.family.label(), self.inner.sign)
    }

    /// `(λ, λ′, λ″, λ‴)` at `z`.
    fn lambda_jet(&self, z: f64) -> PyResult<(f64, f64, f64, f64)> {
        let j = self.inner.lambda(z).map_err(err)?;
        Ok((j.v0, j.v1, j.v2, j.v3))
    }

    fn scalar_curvature(&self, x: f64, y: f64, z: f64) -> PyResult<f64> {
        scalar_curvature(&self.inner, Point::new(x, y, z)).map_err(err)
    }

    /// Fitted `(κ, μ, residual)`; `μ` is `None` where `h` vanishes.
    fn kappa_mu(&self, x: f64, y: f64, z: f64) -> PyResult<(f64, Option<f64>, f64)> {
        let km = extract_kappa_mu(&self.inner, Point::new(x, y, z)).map_err(err)?;
        Ok((km.kappa, km.mu, km.residual))
    }

    /// Worst residual of every structure and curvature check over seeded random points.
    #[pyo3(signature = (points = 100, seed = 42))]
    fn verify<'py>(&self, py: Python<'py>, points: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let pts = random_points(&self.inner, points, seed);
        let rep = run_checks(&self.inner, &pts, &Tolerances::default()).map_err(err)?;
        to_py(py, &rep)
    }

    #[pyo3(signature = (points = 100, seed = 42, tol = 1e-8))]
    fn audit<'py>(&self, py: Python<'py>, points: usize, seed: u64, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        let pts = random_points(&self.inner, points, seed);
        to_py(py, &audit_identities(&self.inner, &pts, tol).map_err(err)?)
    }

    fn curve_criterion(&self, c: f64) -> PyResult<f64> {
        biharmonic::curve_criterion(&self.inner, c).map_err(err)
    }

    fn surface_criterion(&self, c: f64) -> PyResult<f64> {
        biharmonic::surface_criterion(&self.inner, c).map_err(err)
    }

    /// Frame components of the bitension field of the Legendre curve `s ↦ (b, s, c)`.
    #[pyo3(signature = (c, b = 0.0))]
    fn curve_bitension(&self, c: f64, b: f64) -> PyResult<(f64, f64, f64)> {
        let v = biharmonic::curve_bitension(&self.inner, LegendreCurve { b, c }).map_err(err)?;
        Ok((v.u1, v.u2, v.u3))
    }

    /// Frame components of the bitension field of the leaf `z = c`.
    fn surface_bitension(&self, c: f64) -> PyResult<(f64, f64, f64)> {
        let v = biharmonic::surface_bitension(&self.inner, AntiInvariantSurface { c }).map_err(err)?;
        Ok((v.u1, v.u2, v.u3))
    }

    fn surface_geometry<'py>(&self, py: Python<'py>, c: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &biharmonic::surface_geometry(&self.inner, AntiInvariantSurface { c }).map_err(err)?)
    }

    fn characterization<'py>(&self, py: Python<'py>, c: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &biharmonic::characterization_residual(&self.inner, c).map_err(err)?)
    }

    #[pyo3(signature = (which, lo, hi, grid = 10_000, tol = 1e-12))]
    fn find_roots<'py>(
        &self,
        py: Python<'py>,
        which: &str,
        lo: f64,
        hi: f64,
        grid: usize,
        tol: f64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let interval = Interval::new(lo, hi).map_err(err)?;
        let roots = biharmonic::find_roots(&self.inner, self::which(which)?, interval, grid, tol).map_err(err)?;
        to_py(py, &roots)
    }

    #[pyo3(signature = (which, c, tol = 1e-7))]
    fn leaf_report<'py>(&self, py: Python<'py>, which: &str, c: f64, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &biharmonic::leaf_report(&self.inner, self::which(which)?, c, tol).map_err(err)?)
    }
}

/// Integrates the foliation ODE; returns samples, termination reason and drift.
#[pyfunction]
#[pyo3(signature = (beta, sign, lambda0 = 1.0, z0 = 0.0, step = 1e-3, span = 1.0, branch = "decreasing"))]
#[allow(clippy::too_many_arguments)]
fn integrate_foliation<'py>(
    py: Python<'py>,
    beta: f64,
    sign: &str,
    lambda0: f64,
    z0: f64,
    step: f64,
    span: f64,
    branch: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let branch: Branch = branch.parse().map_err(err)?;
    let params = FoliationParams { beta_const: beta, sign: self::sign(sign)?, lambda0, z0, step, span, branch };
    let sol = foliation::integrate_foliation(&params).map_err(err)?;
    #[derive(Serialize)]
    struct Out {
        termination: String,
        drift: f64,
        rows: Vec<foliation::FoliationRow>,
    }
    to_py(py, &Out { termination: sol.termination.to_string(), drift: sol.drift(), rows: sol.rows() })
}

#[pymodule]
fn pykappamu(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModelSpace>()?;
    m.add_function(wrap_pyfunction!(integrate_foliation, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
