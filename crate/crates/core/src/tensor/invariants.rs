use crate::error::Result;
use crate::manifold::{CoefficientField, FrameField, ModelSpace, Point};

use super::Geometry;

/// Fitted `(κ, μ)` of `R(X, Y)ξ = (κI + μh)(η(Y)X − η(X)Y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaMu {
    pub kappa: f64,
    /// `None` when `h` vanishes and `μ` cannot be determined.
    pub mu: Option<f64>,
    /// Largest componentwise defect of the fitted condition over all frame pairs.
    pub residual: f64,
}

/// Scalar fields of the least-squares normal equations for `(κ, μ)`.
struct NormalEquations {
    m11: CoefficientField,
    m12: CoefficientField,
    m22: CoefficientField,
    r1: CoefficientField,
    r2: CoefficientField,
    /// `(R(e_i, e_j)ξ, A_κ, A_μ)` for each frame pair.
    rows: Vec<(FrameField, FrameField, FrameField)>,
}

impl NormalEquations {
    fn build(geo: &Geometry) -> Self {
        let basis = [0, 1, 2].map(FrameField::basis);
        let xi = geo.xi();
        let mut rows = Vec::with_capacity(9);
        for i in 0..3 {
            for j in 0..3 {
                let lhs = geo.riemann(&basis[i], &basis[j], &xi);
                let a_kappa = &basis[i].times(&geo.eta(&basis[j])) - &basis[j].times(&geo.eta(&basis[i]));
                let a_mu = geo.h(&a_kappa);
                rows.push((lhs, a_kappa, a_mu));
            }
        }
        let sum = |f: &dyn Fn(&(FrameField, FrameField, FrameField)) -> CoefficientField| {
            rows.iter().fold(CoefficientField::zero(), |acc, r| &acc + &f(r))
        };
        let m11 = sum(&|r| r.1.dot(&r.1));
        let m12 = sum(&|r| r.1.dot(&r.2));
        let m22 = sum(&|r| r.2.dot(&r.2));
        let r1 = sum(&|r| r.1.dot(&r.0));
        let r2 = sum(&|r| r.2.dot(&r.0));
        Self { m11, m12, m22, r1, r2, rows }
    }

    fn mu_determined(&self, x: f64, y: f64) -> bool {
        let (m11, m12, m22) = (self.m11.value(x, y), self.m12.value(x, y), self.m22.value(x, y));
        let det = m11 * m22 - m12 * m12;
        // |h| below ~1e-8 leaves μ swamped by rounding in the curvature entries.
        m22 > 1e-16 * m11 && det > 1e-14 * m11 * m22
    }

    /// Numerator and denominator fields of `κ`.
    fn kappa_fraction(&self, x: f64, y: f64) -> (CoefficientField, CoefficientField) {
        if self.mu_determined(x, y) {
            let num = &(&self.m22 * &self.r1) - &(&self.m12 * &self.r2);
            let den = &(&self.m11 * &self.m22) - &(&self.m12 * &self.m12);
            (num, den)
        } else {
            (self.r1.clone(), self.m11.clone())
        }
    }

    fn solve(&self, x: f64, y: f64) -> KappaMu {
        let (num, den) = self.kappa_fraction(x, y);
        let kappa = num.value(x, y) / den.value(x, y);
        let mu = if self.mu_determined(x, y) {
            let num = &(&self.m11 * &self.r2) - &(&self.m12 * &self.r1);
            Some(num.value(x, y) / den.value(x, y))
        } else {
            None
        };
        let residual = self
            .rows
            .iter()
            .map(|(lhs, a_k, a_m)| {
                let fit = kappa * a_k.value(x, y) + mu.unwrap_or(0.0) * a_m.value(x, y);
                (lhs.value(x, y) - fit).max_abs()
            })
            .fold(0.0, f64::max);
        KappaMu { kappa, mu, residual }
    }
}

/// Least-squares `(κ, μ)` over all nine frame pairs of the defining condition.
pub fn extract_kappa_mu(space: &ModelSpace, p: Point) -> Result<KappaMu> {
    let geo = Geometry::at(space, p)?;
    Ok(NormalEquations::build(&geo).solve(p.x, p.y))
}

/// `ξ(κ)` for the fitted `κ`, differentiated exactly through the normal equations.
pub fn xi_derivative_of_kappa(space: &ModelSpace, p: Point) -> Result<f64> {
    let geo = Geometry::at(space, p)?;
    let eqs = NormalEquations::build(&geo);
    let (num, den) = eqs.kappa_fraction(p.x, p.y);
    let xi = geo.xi();
    let (n, d) = (num.value(p.x, p.y), den.value(p.x, p.y));
    let dn = geo.derivative(&xi, &num).value(p.x, p.y);
    let dd = geo.derivative(&xi, &den).value(p.x, p.y);
    Ok((dn * d - n * dd) / (d * d))
}

/// `S = Σ_{i≠j} g(R(e_i, e_j)e_j, e_i)`.
pub fn scalar_curvature(space: &ModelSpace, p: Point) -> Result<f64> {
    let geo = Geometry::at(space, p)?;
    Ok(scalar_curvature_of(&geo, p.x, p.y))
}

pub(crate) fn scalar_curvature_of(geo: &Geometry, x: f64, y: f64) -> f64 {
    let basis = [0, 1, 2].map(FrameField::basis);
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                s += geo.riemann(&basis[i], &basis[j], &basis[j]).value(x, y).to_array()[i];
            }
        }
    }
    s
}

/// `(Δλ, ‖grad λ‖²)` with `Δλ = −Σ_i {e_i(e_i λ) − (∇_{e_i} e_i) λ}`.
pub fn lap_grad_lambda(space: &ModelSpace, p: Point) -> Result<(f64, f64)> {
    let geo = Geometry::at(space, p)?;
    Ok(lap_grad_of(&geo, p.x, p.y))
}

pub(crate) fn lap_grad_of(geo: &Geometry, x: f64, y: f64) -> (f64, f64) {
    let lambda = CoefficientField::constant(geo.lambda());
    let mut laplacian = 0.0;
    let mut grad_sq = 0.0;
    for i in 0..3 {
        let e = FrameField::basis(i);
        let first = geo.derivative(&e, &lambda);
        let second = geo.derivative(&e, &first);
        let along = geo.derivative(geo.connection_field(i, i), &lambda);
        laplacian -= second.value(x, y) - along.value(x, y);
        grad_sq += first.value(x, y).powi(2);
    }
    (laplacian, grad_sq)
}

/// Bracket relations of `ξ` with an `h`-eigenframe `{X, φX}`, `hX = λX`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrabilityReport {
    /// Frame index (1 = e₂, 2 = e₃) of the unit eigenvector `X` with `hX = λX`.
    pub eigenvector: usize,
    /// `1 + λ − μ/2`, the predicted coefficient of `φX` in `[ξ, X]`.
    pub first_coefficient: f64,
    /// `λ − 1 + μ/2`, the predicted coefficient of `X` in `[ξ, φX]`.
    pub second_coefficient: f64,
    pub first_residual: f64,
    pub second_residual: f64,
    /// `g([ξ, e₂], e₃)`; zero means `span{ξ, e₂}` is closed under brackets.
    pub xi_e2_normal_component: f64,
    pub span_xi_e2_closed: bool,
}

/// Checks `[ξ, X] = (1 + λ − μ/2)φX` and `[ξ, φX] = (λ − 1 + μ/2)X` with `λ`,
/// `μ` taken from the fitted `(κ, μ)`.
pub fn integrability_check(space: &ModelSpace, p: Point) -> Result<IntegrabilityReport> {
    let geo = Geometry::at(space, p)?;
    let eqs = NormalEquations::build(&geo);
    let fit = eqs.solve(p.x, p.y);
    let lambda = (1.0 - fit.kappa).max(0.0).sqrt();
    let mu = fit.mu.unwrap_or(0.0);
    let e2 = FrameField::basis(1);
    let e3 = FrameField::basis(2);
    let eigenvalue_e2 = geo.h(&e2).value(p.x, p.y).u2;
    let (eigenvector, x) = if eigenvalue_e2 >= 0.0 { (1, e2.clone()) } else { (2, e3) };
    let xi = geo.xi();
    let phi_x = geo.phi(&x);
    let first_coefficient = 1.0 + lambda - 0.5 * mu;
    let second_coefficient = lambda - 1.0 + 0.5 * mu;
    let first = geo.bracket(&xi, &x).value(p.x, p.y) - first_coefficient * phi_x.value(p.x, p.y);
    let second = geo.bracket(&xi, &phi_x).value(p.x, p.y) - second_coefficient * x.value(p.x, p.y);
    let normal = geo.bracket(&xi, &e2).value(p.x, p.y).u3;
    Ok(IntegrabilityReport {
        eigenvector,
        first_coefficient,
        second_coefficient,
        first_residual: first.norm(),
        second_residual: second.norm(),
        xi_e2_normal_component: normal,
        span_xi_e2_closed: normal.abs() < 1e-12,
    })
}
