//! Comparison of first-principles curvature against closed-form expressions in `λ`.

use serde::Serialize;

use crate::error::Result;
use crate::manifold::{FrameField, ModelSpace, Point};

use super::invariants::{lap_grad_of, scalar_curvature_of};
use super::Geometry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditStatus {
    Pass,
    Flagged,
}

/// Worst case of one identity over the audited points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditRecord {
    pub name: String,
    /// First-principles side.
    pub lhs: f64,
    /// Closed-form side.
    pub rhs: f64,
    pub abs_residual: f64,
    pub tolerance: f64,
    pub status: AuditStatus,
    /// Height `z` of the worst point.
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub records: Vec<AuditRecord>,
}

impl AuditReport {
    pub fn pass_count(&self) -> usize {
        self.records.iter().filter(|r| r.status == AuditStatus::Pass).count()
    }

    pub fn flag_count(&self) -> usize {
        self.records.len() - self.pass_count()
    }

    pub fn get(&self, name: &str) -> Option<&AuditRecord> {
        self.records.iter().find(|r| r.name == name)
    }
}

pub const PHI_SECTIONAL_E2: &str = "phi_sectional_curvature_e2";
pub const PHI_SECTIONAL_E3: &str = "phi_sectional_curvature_e3";
pub const SCALAR_LAPLACIAN_FORM: &str = "scalar_curvature_laplacian_form";
pub const SCALAR_LEAF_FORM_QUARTER: &str = "scalar_curvature_leaf_form_quarter";
pub const SCALAR_LEAF_FORM_HALF: &str = "scalar_curvature_leaf_form_half";
pub const GRADIENT_COEFFICIENT: &str = "scalar_curvature_gradient_coefficient";
pub const GRADIENT_COEFFICIENT_QUARTER: &str = "scalar_curvature_gradient_coefficient_quarter";

/// `(λ′/λ)²` below this makes the fitted gradient coefficient ill-conditioned.
const COEFFICIENT_MIN_WEIGHT: f64 = 1e-4;

struct Worst {
    lhs: f64,
    rhs: f64,
    residual: f64,
    z: f64,
}

/// Audits the curvature identities of the model at `points`.
///
/// * `phi_sectional_curvature_*`: `R(φX, X)X = (−Δλ/2λ − ‖grad λ‖²/2λ² − κ − μ) φX`
///   for unit `X` in each `h`-eigenline, residual is the vector norm.
/// * `scalar_curvature_laplacian_form`: `S = −Δλ/λ − ‖grad λ‖²/λ² + 2(κ − μ)`.
/// * `scalar_curvature_leaf_form_{quarter,half}`:
///   `S = λ″/λ − c (λ′)²/λ² − 2(1 ± λ)²` with `c = 3/4` and `c = 3/2`.
/// * `scalar_curvature_gradient_coefficient`: the coefficient `c` fitted from the
///   first-principles `S` against the one implied by the Laplacian form.
/// * `scalar_curvature_gradient_coefficient_quarter`: the fitted `c` against `3/4`.
///
/// `κ = 1 − λ²` and `μ = 2(1 ± λ)` enter as closed forms; `S`, `Δλ`,
/// `‖grad λ‖²` and `R` are computed from the frame.
pub fn audit_identities(space: &ModelSpace, points: &[Point], tol: f64) -> Result<AuditReport> {
    let s = space.sign.value();
    let mut worst: Vec<(&'static str, Worst)> = Vec::new();
    let mut note = |name: &'static str, lhs: f64, rhs: f64, residual: f64, z: f64| {
        let w = Worst { lhs, rhs, residual, z };
        match worst.iter_mut().find(|(n, _)| *n == name) {
            Some((_, cur)) if cur.residual >= residual && !residual.is_nan() => {}
            Some((_, cur)) => *cur = w,
            None => worst.push((name, w)),
        }
    };

    for p in points {
        let geo = Geometry::at(space, *p)?;
        let l = geo.lambda();
        let (lam, dl, ddl) = (l.v0, l.v1, l.v2);
        let kappa = 1.0 - lam * lam;
        let mu = 2.0 * (1.0 + s * lam);
        let (lap, grad_sq) = lap_grad_of(&geo, p.x, p.y);
        let scalar = scalar_curvature_of(&geo, p.x, p.y);

        let sectional = -lap / (2.0 * lam) - grad_sq / (2.0 * lam * lam) - kappa - mu;
        for (name, idx) in [(PHI_SECTIONAL_E2, 1), (PHI_SECTIONAL_E3, 2)] {
            let x = FrameField::basis(idx);
            let phi_x = geo.phi(&x);
            let r = geo.riemann(&phi_x, &x, &x).value(p.x, p.y);
            let phi_v = phi_x.value(p.x, p.y);
            let residual = (r - sectional * phi_v).norm();
            note(name, r.dot(phi_v), sectional, residual, p.z);
        }

        let laplacian_form = -lap / lam - grad_sq / (lam * lam) + 2.0 * (kappa - mu);
        note(SCALAR_LAPLACIAN_FORM, scalar, laplacian_form, (scalar - laplacian_form).abs(), p.z);

        let weight = dl * dl / (lam * lam);
        let base = ddl / lam - 2.0 * (1.0 + s * lam).powi(2);
        for (name, c) in [(SCALAR_LEAF_FORM_QUARTER, 0.75), (SCALAR_LEAF_FORM_HALF, 1.5)] {
            let rhs = base - c * weight;
            note(name, scalar, rhs, (scalar - rhs).abs(), p.z);
        }

        if weight > COEFFICIENT_MIN_WEIGHT {
            let fitted = -(scalar - base) / weight;
            let implied = -(laplacian_form - base) / weight;
            note(GRADIENT_COEFFICIENT, fitted, implied, (fitted - implied).abs(), p.z);
            note(GRADIENT_COEFFICIENT_QUARTER, fitted, 0.75, (fitted - 0.75).abs(), p.z);
        }
    }

    let mut records: Vec<AuditRecord> = worst
        .into_iter()
        .map(|(name, w)| AuditRecord {
            name: name.to_string(),
            lhs: w.lhs,
            rhs: w.rhs,
            abs_residual: w.residual,
            tolerance: tol,
            status: if w.residual < tol { AuditStatus::Pass } else { AuditStatus::Flagged },
            z: w.z,
        })
        .collect();
    records.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(AuditReport { records })
}
