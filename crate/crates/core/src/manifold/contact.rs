use serde::Serialize;

use crate::error::Result;
use crate::tensor::Geometry;

use super::{FrameField, FrameVector, ModelSpace, Point, SignChoice};

/// `(η, ξ, φ)` of the model in frame components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactStructure {
    pub sign: SignChoice,
}

impl ContactStructure {
    pub fn eta(&self, v: FrameVector) -> f64 {
        v.u1
    }

    pub fn xi(&self) -> FrameVector {
        FrameVector::new(1.0, 0.0, 0.0)
    }

    pub fn phi(&self, v: FrameVector) -> FrameVector {
        let s = self.sign.value();
        FrameVector::new(0.0, -s * v.u3, s * v.u2)
    }

    /// Matrix of `φ` acting on frame component columns.
    pub fn phi_matrix(&self) -> [[f64; 3]; 3] {
        let s = self.sign.value();
        [[0.0, 0.0, 0.0], [0.0, 0.0, -s], [0.0, s, 0.0]]
    }
}

pub fn contact_at(space: &ModelSpace, p: Point) -> Result<ContactStructure> {
    space.family.domain.check(p.z)?;
    Ok(ContactStructure { sign: space.sign })
}

/// Max-norm residuals of the contact metric axioms at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StructureResiduals {
    /// `|η(ξ) − 1|`.
    pub eta_xi: f64,
    /// `φ² + I − η ⊗ ξ`.
    pub phi_square: f64,
    /// `g(φX, φY) − g(X, Y) + η(X)η(Y)`.
    pub compatibility: f64,
    /// `dη(X, Y) − g(X, φY)` with `dη(X, Y) = ½(X η(Y) − Y η(X) − η([X, Y]))`.
    pub contact_condition: f64,
    /// `[φ, φ] + 2 dη ⊗ ξ`; zero exactly for Sasakian structures.
    pub sasakian_defect: f64,
}

impl StructureResiduals {
    /// Largest of the four contact metric residuals (the Sasakian defect excluded).
    pub fn max_contact_residual(&self) -> f64 {
        self.eta_xi.max(self.phi_square).max(self.compatibility).max(self.contact_condition)
    }
}

/// Evaluates every contact metric axiom from first principles at `p`.
///
/// Residuals above `tol` are only reported; the returned flag says whether the
/// four contact metric residuals are all below `tol`.
pub fn verify_structure(space: &ModelSpace, p: Point, tol: f64) -> Result<(StructureResiduals, bool)> {
    let geo = Geometry::at(space, p)?;
    let c = contact_at(space, p)?;
    let (x, y) = (p.x, p.y);
    let basis: [FrameVector; 3] = [0, 1, 2].map(FrameVector::basis);
    let fields: [FrameField; 3] = [0, 1, 2].map(FrameField::basis);

    let eta_xi = (c.eta(c.xi()) - 1.0).abs();

    let mut phi_square = 0.0_f64;
    let mut compatibility = 0.0_f64;
    for (j, &v) in basis.iter().enumerate() {
        let lhs = c.phi(c.phi(v));
        let rhs = -1.0 * v + c.eta(v) * c.xi();
        phi_square = phi_square.max((lhs - rhs).max_abs());
        for &w in &basis[j..] {
            let d = c.phi(v).dot(c.phi(w)) - v.dot(w) + c.eta(v) * c.eta(w);
            compatibility = compatibility.max(d.abs());
        }
    }

    let mut contact_condition = 0.0_f64;
    let mut sasakian_defect = 0.0_f64;
    for (i, fx) in fields.iter().enumerate() {
        for (j, fy) in fields.iter().enumerate() {
            let bracket = geo.bracket(fx, fy);
            let x_eta_y = geo.derivative(fx, &geo.eta(fy)).value(x, y);
            let y_eta_x = geo.derivative(fy, &geo.eta(fx)).value(x, y);
            let d_eta = 0.5 * (x_eta_y - y_eta_x - geo.eta(&bracket).value(x, y));
            let rhs = basis[i].dot(c.phi(basis[j]));
            contact_condition = contact_condition.max((d_eta - rhs).abs());

            let phi_x = geo.phi(fx);
            let phi_y = geo.phi(fy);
            let nijenhuis = &(&(&geo.phi(&geo.phi(&bracket)) + &geo.bracket(&phi_x, &phi_y))
                - &geo.phi(&geo.bracket(&phi_x, fy)))
                - &geo.phi(&geo.bracket(fx, &phi_y));
            let defect = nijenhuis.value(x, y) + (2.0 * d_eta) * c.xi();
            sasakian_defect = sasakian_defect.max(defect.max_abs());
        }
    }

    let res = StructureResiduals { eta_xi, phi_square, compatibility, contact_condition, sasakian_defect };
    let ok = res.max_contact_residual() < tol;
    Ok((res, ok))
}
