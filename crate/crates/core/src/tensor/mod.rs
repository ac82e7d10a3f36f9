//! Frame-field tensor calculus on a [`ModelSpace`].
//!
//! Everything starts from the coordinate expressions of the frame. Lie brackets
//! give the structure constants `c_ijk = g([e_i, e_j], e_k)`, the Koszul formula
//! gives the connection, and curvature follows from its definition
//! `R(X, Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z`. No closed-form identity of the
//! model is used along the way.

pub mod audit;
mod invariants;

pub use audit::{audit_identities, AuditRecord, AuditReport, AuditStatus};
pub use invariants::{
    extract_kappa_mu, integrability_check, lap_grad_lambda, scalar_curvature, xi_derivative_of_kappa,
    IntegrabilityReport, KappaMu,
};

use crate::error::Result;
use crate::jets::Jet3;
use crate::manifold::{CoefficientField, CoordinateField, FrameField, FrameVector, ModelSpace, Point, SignChoice};

/// `gamma[i][j][k] = g(∇_{e_i} e_j, e_k)` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionTable {
    pub gamma: [[[f64; 3]; 3]; 3],
}

impl ConnectionTable {
    /// `∇_{e_i} e_j` as a frame vector.
    pub fn derivative(&self, i: usize, j: usize) -> FrameVector {
        FrameVector::from_array(self.gamma[i][j])
    }

    /// Largest `|gamma[i][j][k] + gamma[i][k][j]|`.
    pub fn metricity_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    worst = worst.max((self.gamma[i][j][k] + self.gamma[i][k][j]).abs());
                }
            }
        }
        worst
    }

    /// Largest `|gamma[i][j][k] − gamma[j][i][k] − c_ijk|`.
    pub fn torsion_defect(&self, structure: &[[[f64; 3]; 3]; 3]) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let t = self.gamma[i][j][k] - self.gamma[j][i][k] - structure[i][j][k];
                    worst = worst.max(t.abs());
                }
            }
        }
        worst
    }
}

/// Geometry of the slice `ℝ² × {z}` together with exact z-jets of every field.
///
/// Fields held here are valid on all of `ℝ²` at this height; evaluating them at
/// `(x, y)` gives pointwise values.
#[derive(Debug, Clone)]
pub struct Geometry {
    z: f64,
    sign: SignChoice,
    lambda: Jet3,
    frame: [CoordinateField; 3],
    /// `[e_i, e_j]` in frame components.
    brackets: [[FrameField; 3]; 3],
    /// `∇_{e_i} e_j` in frame components.
    connection: [[FrameField; 3]; 3],
}

impl Geometry {
    pub fn new(space: &ModelSpace, z: f64) -> Result<Self> {
        let lambda = space.lambda(z)?;
        let frame = space.frame_fields(z)?;
        let mut geo = Geometry {
            z,
            sign: space.sign,
            lambda,
            frame,
            brackets: Default::default(),
            connection: Default::default(),
        };
        for i in 0..3 {
            for j in 0..3 {
                let b = geo.lie_bracket(&geo.frame[i], &geo.frame[j]);
                geo.brackets[i][j] = geo.to_frame(&b);
            }
        }
        // Koszul for an orthonormal frame: 2Γ_ijk = c_ijk − c_jki + c_kij.
        for i in 0..3 {
            for j in 0..3 {
                let comps = [0, 1, 2].map(|k| {
                    let c_ijk = geo.brackets[i][j].component(k);
                    let c_jki = geo.brackets[j][k].component(i);
                    let c_kij = geo.brackets[k][i].component(j);
                    (&(c_ijk - c_jki) + c_kij).scale(0.5)
                });
                geo.connection[i][j] = FrameField(comps);
            }
        }
        Ok(geo)
    }

    pub fn at(space: &ModelSpace, p: Point) -> Result<Self> {
        Self::new(space, p.z)
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn sign(&self) -> SignChoice {
        self.sign
    }

    pub fn lambda(&self) -> Jet3 {
        self.lambda
    }

    pub fn frame(&self) -> &[CoordinateField; 3] {
        &self.frame
    }

    /// `[X, Y]^k = X^j ∂_j Y^k − Y^j ∂_j X^k`.
    pub fn lie_bracket(&self, x: &CoordinateField, y: &CoordinateField) -> CoordinateField {
        CoordinateField([0, 1, 2].map(|k| &x.apply(&y.0[k]) - &y.apply(&x.0[k])))
    }

    /// Frame components of a coordinate field, by back-substitution in the unit
    /// triangular frame matrix.
    pub fn to_frame(&self, v: &CoordinateField) -> FrameField {
        let e3 = &self.frame[2];
        let u3 = v.0[2].clone();
        let u1 = &v.0[0] - &(&e3.0[0] * &u3);
        let u2 = &v.0[1] - &(&e3.0[1] * &u3);
        FrameField([u1, u2, u3])
    }

    pub fn to_coordinates(&self, v: &FrameField) -> CoordinateField {
        CoordinateField([0, 1, 2].map(|c| {
            (0..3).fold(CoefficientField::zero(), |acc, i| &acc + &(&v.0[i] * &self.frame[i].0[c]))
        }))
    }

    /// Lie bracket of two fields given in frame components.
    pub fn bracket(&self, x: &FrameField, y: &FrameField) -> FrameField {
        let b = self.lie_bracket(&self.to_coordinates(x), &self.to_coordinates(y));
        self.to_frame(&b)
    }

    /// Structure constants `c_ijk = g([e_i, e_j], e_k)` at `(x, y)`.
    pub fn structure_constants(&self, x: f64, y: f64) -> [[[f64; 3]; 3]; 3] {
        let mut c = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                c[i][j] = self.brackets[i][j].value(x, y).to_array();
            }
        }
        c
    }

    pub fn connection_table(&self, x: f64, y: f64) -> ConnectionTable {
        let mut gamma = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                gamma[i][j] = self.connection[i][j].value(x, y).to_array();
            }
        }
        ConnectionTable { gamma }
    }

    /// Directional derivative `X(f)`.
    pub fn derivative(&self, x: &FrameField, f: &CoefficientField) -> CoefficientField {
        (0..3).fold(CoefficientField::zero(), |acc, i| {
            if x.0[i].is_zero() {
                acc
            } else {
                &acc + &(&x.0[i] * &self.frame[i].apply(f))
            }
        })
    }

    /// `∇_X Y = Σ_i X^i (Σ_k e_i(Y^k) e_k + Σ_j Y^j ∇_{e_i} e_j)`.
    pub fn covariant(&self, x: &FrameField, y: &FrameField) -> FrameField {
        let mut out = FrameField::zero();
        for i in 0..3 {
            if x.0[i].is_zero() {
                continue;
            }
            let mut along = FrameField([0, 1, 2].map(|k| self.frame[i].apply(&y.0[k])));
            for j in 0..3 {
                if !y.0[j].is_zero() {
                    along = &along + &self.connection[i][j].times(&y.0[j]);
                }
            }
            out = &out + &along.times(&x.0[i]);
        }
        out
    }

    /// `R(X, Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z`.
    pub fn riemann(&self, x: &FrameField, y: &FrameField, z: &FrameField) -> FrameField {
        let xy = self.covariant(x, &self.covariant(y, z));
        let yx = self.covariant(y, &self.covariant(x, z));
        let br = self.covariant(&self.bracket(x, y), z);
        &(&xy - &yx) - &br
    }

    /// `φ(u₁, u₂, u₃) = (0, ∓u₃, ±u₂)`.
    pub fn phi(&self, v: &FrameField) -> FrameField {
        let s = self.sign.value();
        FrameField([CoefficientField::zero(), v.0[2].scale(-s), v.0[1].scale(s)])
    }

    /// `ξ = e₁`.
    pub fn xi(&self) -> FrameField {
        FrameField::basis(0)
    }

    /// `η(X)` as a scalar field.
    pub fn eta(&self, v: &FrameField) -> CoefficientField {
        v.0[0].clone()
    }

    /// `hX = ½ ([ξ, φX] − φ[ξ, X])`, half the Lie derivative of `φ` along `ξ`.
    pub fn h(&self, v: &FrameField) -> FrameField {
        let xi = self.xi();
        let a = self.bracket(&xi, &self.phi(v));
        let b = self.phi(&self.bracket(&xi, v));
        (&a - &b).scale(0.5)
    }

    /// `∇_{e_i} e_j` as a field.
    pub fn connection_field(&self, i: usize, j: usize) -> &FrameField {
        &self.connection[i][j]
    }
}

/// `[X, Y]` of two fields at `p`, in coordinate components.
pub fn lie_bracket(space: &ModelSpace, x: &CoordinateField, y: &CoordinateField, p: Point) -> Result<[f64; 3]> {
    let geo = Geometry::at(space, p)?;
    Ok(geo.lie_bracket(x, y).value(p.x, p.y))
}

pub fn connection_coeffs(space: &ModelSpace, p: Point) -> Result<ConnectionTable> {
    Ok(Geometry::at(space, p)?.connection_table(p.x, p.y))
}

/// `∇_X Y` at `p` for fields in frame components.
pub fn covariant_derivative(space: &ModelSpace, x: &FrameField, y: &FrameField, p: Point) -> Result<FrameVector> {
    let geo = Geometry::at(space, p)?;
    Ok(geo.covariant(x, y).value(p.x, p.y))
}

/// `R(X, Y)Z` at `p` for tangent vectors at `p`.
pub fn riemann(space: &ModelSpace, x: FrameVector, y: FrameVector, z: FrameVector, p: Point) -> Result<FrameVector> {
    let geo = Geometry::at(space, p)?;
    let r = geo.riemann(&FrameField::constant(x), &FrameField::constant(y), &FrameField::constant(z));
    Ok(r.value(p.x, p.y))
}

pub fn h_operator(space: &ModelSpace, x: FrameVector, p: Point) -> Result<FrameVector> {
    let geo = Geometry::at(space, p)?;
    Ok(geo.h(&FrameField::constant(x)).value(p.x, p.y))
}

/// All `R(e_i, e_j)e_k` at `(x, y)`, indexed `[i][j][k]`.
pub fn riemann_table(geo: &Geometry, x: f64, y: f64) -> [[[FrameVector; 3]; 3]; 3] {
    let basis = [0, 1, 2].map(FrameField::basis);
    let mut out = [[[FrameVector::default(); 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            for k in 0..3 {
                out[i][j][k] = geo.riemann(&basis[i], &basis[j], &basis[k]).value(x, y);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::LambdaFamily;
    use approx::assert_abs_diff_eq;

    fn space(sign: SignChoice) -> ModelSpace {
        ModelSpace::new(LambdaFamily::power(0.5).unwrap(), sign)
    }

    fn vclose(a: FrameVector, b: FrameVector, tol: f64) {
        assert!((a - b).max_abs() < tol, "{a:?} vs {b:?}");
    }

    #[test]
    fn brackets_of_the_frame() {
        for sign in [SignChoice::Plus, SignChoice::Minus] {
            let sp = space(sign);
            let p = Point::new(0.3, -0.8, 2.5);
            let geo = Geometry::at(&sp, p).unwrap();
            let l = sp.lambda(p.z).unwrap();
            let c = geo.structure_constants(p.x, p.y);
            assert_eq!(c[0][1], [0.0; 3]);
            assert_abs_diff_eq!(c[0][2][1], 2.0 * l.v0, epsilon = 1e-14);
            assert_abs_diff_eq!(c[0][2][0], 0.0);
            assert_abs_diff_eq!(c[1][2][0], 2.0 * sign.value(), epsilon = 1e-14);
            assert_abs_diff_eq!(c[1][2][1], -l.v1 / (2.0 * l.v0), epsilon = 1e-14);
            // coordinate route gives the same bracket
            let [e1, _, e3] = sp.frame_fields(p.z).unwrap();
            let b = lie_bracket(&sp, &e1, &e3, p).unwrap();
            assert_abs_diff_eq!(b[1], 2.0 * l.v0, epsilon = 1e-14);
        }
    }

    #[test]
    fn connection_relations() {
        for sign in [SignChoice::Plus, SignChoice::Minus] {
            let sp = space(sign);
            let p = Point::new(-0.4, 0.9, 3.0);
            let t = connection_coeffs(&sp, p).unwrap();
            let l = sp.lambda(p.z).unwrap();
            let a = l.v1 / (2.0 * l.v0);
            let s = sign.value();
            vclose(t.derivative(0, 0), FrameVector::default(), 1e-14);
            vclose(t.derivative(2, 2), FrameVector::default(), 1e-14);
            vclose(t.derivative(1, 1), FrameVector::new(0.0, 0.0, a), 1e-14);
            vclose(t.derivative(1, 2), FrameVector::new(l.v0 + s, -a, 0.0), 1e-14);
            vclose(t.derivative(1, 0), FrameVector::new(0.0, 0.0, -(l.v0 + s)), 1e-14);
            assert!(t.metricity_defect() < 1e-14);
        }
    }

    #[test]
    fn covariant_derivative_of_frame_fields() {
        let sp = space(SignChoice::Plus);
        let p = Point::new(0.2, 0.1, 1.7);
        let l = sp.lambda(p.z).unwrap();
        let v = covariant_derivative(&sp, &FrameField::basis(1), &FrameField::basis(0), p).unwrap();
        vclose(v, FrameVector::new(0.0, 0.0, -(l.v0 + 1.0)), 1e-14);
        // constant components: only connection terms survive
        let w = FrameVector::new(0.3, -1.2, 0.5);
        let lhs = covariant_derivative(&sp, &FrameField::basis(0), &FrameField::constant(w), p).unwrap();
        let t = connection_coeffs(&sp, p).unwrap();
        let rhs = w.u1 * t.derivative(0, 0) + w.u2 * t.derivative(0, 1) + w.u3 * t.derivative(0, 2);
        vclose(lhs, rhs, 1e-14);
        // e₂ g(e₂, e₃) = 0 = g(∇e₂ e₂, e₃) + g(e₂, ∇e₂ e₃)
        let sum = t.gamma[1][1][2] + t.gamma[1][2][1];
        assert_abs_diff_eq!(sum, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn h_eigenvalues() {
        for sign in [SignChoice::Plus, SignChoice::Minus] {
            let sp = space(sign);
            let p = Point::new(0.5, 0.5, 2.0);
            let l = sp.lambda(p.z).unwrap().v0;
            let s = sign.value();
            vclose(h_operator(&sp, FrameVector::basis(0), p).unwrap(), FrameVector::default(), 1e-15);
            vclose(h_operator(&sp, FrameVector::basis(1), p).unwrap(), FrameVector::new(0.0, s * l, 0.0), 1e-14);
            vclose(h_operator(&sp, FrameVector::basis(2), p).unwrap(), FrameVector::new(0.0, 0.0, -s * l), 1e-14);
        }
    }

    #[test]
    fn riemann_is_antisymmetric_in_first_pair() {
        let sp = space(SignChoice::Minus);
        let p = Point::new(0.1, 0.2, 1.5);
        let x = FrameVector::new(0.3, 0.7, -0.2);
        let z = FrameVector::new(1.0, -0.5, 0.25);
        vclose(riemann(&sp, x, x, z, p).unwrap(), FrameVector::default(), 1e-13);
    }
}
