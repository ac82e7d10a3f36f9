//! Component functions of vector fields on the model space.
//!
//! On the model `ℝ² × I` every quantity built from the frame is a polynomial in
//! `x, y` whose coefficients are smooth functions of `z`. [`CoefficientField`]
//! stores exactly that: a sparse polynomial in `x, y` with [`Jet3`]
//! coefficients taken at a fixed `z`. Partial derivatives in `x` and `y` act on
//! the polynomial, `∂/∂z` acts on the jets, so every directional derivative is
//! exact. Each `∂/∂z` consumes one order of the jets.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::jets::Jet3;

use super::FrameVector;

/// `Σ c_ij(z) x^i y^j` with jet coefficients at a fixed `z`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoefficientField {
    terms: BTreeMap<(u32, u32), Jet3>,
}

impl CoefficientField {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Jet3) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn scalar(c: f64) -> Self {
        Self::constant(Jet3::constant(c))
    }

    pub fn monomial(i: u32, j: u32, c: Jet3) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        Self { terms }
    }

    /// `a(z) + b(z) x + c(z) y`.
    pub fn affine(a: Jet3, b: Jet3, c: Jet3) -> Self {
        let mut f = Self::constant(a);
        f.accumulate((1, 0), b);
        f.accumulate((0, 1), c);
        f
    }

    fn accumulate(&mut self, key: (u32, u32), c: Jet3) {
        let slot = self.terms.entry(key).or_insert(Jet3::ZERO);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total polynomial degree in `x, y`; `None` for the zero field.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn scale(&self, k: f64) -> Self {
        self.mul_jet(Jet3::constant(k))
    }

    pub fn mul_jet(&self, k: Jet3) -> Self {
        let mut out = Self::zero();
        for (&key, &c) in &self.terms {
            out.accumulate(key, c * k);
        }
        out
    }

    pub fn partial_x(&self) -> Self {
        let mut out = Self::zero();
        for (&(i, j), &c) in &self.terms {
            if i > 0 {
                out.accumulate((i - 1, j), c.scale(i as f64));
            }
        }
        out
    }

    pub fn partial_y(&self) -> Self {
        let mut out = Self::zero();
        for (&(i, j), &c) in &self.terms {
            if j > 0 {
                out.accumulate((i, j - 1), c.scale(j as f64));
            }
        }
        out
    }

    pub fn partial_z(&self) -> Self {
        let mut out = Self::zero();
        for (&key, &c) in &self.terms {
            out.accumulate(key, c.derivative());
        }
        out
    }

    /// Partial derivative along coordinate `axis` (0 = x, 1 = y, 2 = z).
    pub fn partial(&self, axis: usize) -> Self {
        match axis {
            0 => self.partial_x(),
            1 => self.partial_y(),
            2 => self.partial_z(),
            _ => panic!("coordinate axis {axis} out of range"),
        }
    }

    /// Jet in `z` of the field at fixed `(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> Jet3 {
        self.terms
            .iter()
            .fold(Jet3::ZERO, |acc, (&(i, j), &c)| acc + c.scale(x.powi(i as i32) * y.powi(j as i32)))
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.eval(x, y).v0
    }
}

impl Add for &CoefficientField {
    type Output = CoefficientField;
    fn add(self, rhs: &CoefficientField) -> CoefficientField {
        let mut out = self.clone();
        for (&key, &c) in &rhs.terms {
            out.accumulate(key, c);
        }
        out
    }
}

impl Sub for &CoefficientField {
    type Output = CoefficientField;
    fn sub(self, rhs: &CoefficientField) -> CoefficientField {
        let mut out = self.clone();
        for (&key, &c) in &rhs.terms {
            out.accumulate(key, -c);
        }
        out
    }
}

impl Mul for &CoefficientField {
    type Output = CoefficientField;
    fn mul(self, rhs: &CoefficientField) -> CoefficientField {
        let mut out = CoefficientField::zero();
        for (&(i, j), &a) in &self.terms {
            for (&(k, l), &b) in &rhs.terms {
                out.accumulate((i + k, j + l), a * b);
            }
        }
        out
    }
}

impl Neg for &CoefficientField {
    type Output = CoefficientField;
    fn neg(self) -> CoefficientField {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CoefficientField {
            type Output = CoefficientField;
            fn $m(self, rhs: CoefficientField) -> CoefficientField {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Vector field by its coordinate components along `∂x, ∂y, ∂z`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoordinateField(pub [CoefficientField; 3]);

impl CoordinateField {
    pub fn value(&self, x: f64, y: f64) -> [f64; 3] {
        [0, 1, 2].map(|k| self.0[k].value(x, y))
    }

    /// Directional derivative `X(f) = Σ X^c ∂_c f`.
    pub fn apply(&self, f: &CoefficientField) -> CoefficientField {
        (0..3).fold(CoefficientField::zero(), |acc, c| {
            if self.0[c].is_zero() {
                acc
            } else {
                &acc + &(&self.0[c] * &f.partial(c))
            }
        })
    }
}

/// Vector field by its components in the orthonormal frame `e₁, e₂, e₃`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrameField(pub [CoefficientField; 3]);

impl FrameField {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The frame field `e_i` (0-based index).
    pub fn basis(i: usize) -> Self {
        let mut f = Self::zero();
        f.0[i] = CoefficientField::scalar(1.0);
        f
    }

    /// Field with the same frame components at every point.
    pub fn constant(v: FrameVector) -> Self {
        Self(v.to_array().map(CoefficientField::scalar))
    }

    pub fn component(&self, k: usize) -> &CoefficientField {
        &self.0[k]
    }

    pub fn scale(&self, k: f64) -> Self {
        Self([0, 1, 2].map(|i| self.0[i].scale(k)))
    }

    /// Pointwise product with a scalar field.
    pub fn times(&self, f: &CoefficientField) -> Self {
        Self([0, 1, 2].map(|i| &self.0[i] * f))
    }

    /// Pointwise inner product `g(self, other)`.
    pub fn dot(&self, other: &FrameField) -> CoefficientField {
        (0..3).fold(CoefficientField::zero(), |acc, k| &acc + &(&self.0[k] * &other.0[k]))
    }

    pub fn eval(&self, x: f64, y: f64) -> [Jet3; 3] {
        [0, 1, 2].map(|k| self.0[k].eval(x, y))
    }

    pub fn value(&self, x: f64, y: f64) -> FrameVector {
        let [u1, u2, u3] = [0, 1, 2].map(|k| self.0[k].value(x, y));
        FrameVector::new(u1, u2, u3)
    }
}

impl Add for &FrameField {
    type Output = FrameField;
    fn add(self, rhs: &FrameField) -> FrameField {
        FrameField([0, 1, 2].map(|k| &self.0[k] + &rhs.0[k]))
    }
}

impl Sub for &FrameField {
    type Output = FrameField;
    fn sub(self, rhs: &FrameField) -> FrameField {
        FrameField([0, 1, 2].map(|k| &self.0[k] - &rhs.0[k]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> CoefficientField {
        CoefficientField::affine(Jet3::constant(1.0), Jet3::variable(2.0), Jet3::constant(-3.0))
    }

    #[test]
    fn affine_partials_are_the_coefficients() {
        let f = xy();
        assert_eq!(f.partial_x(), CoefficientField::constant(Jet3::variable(2.0)));
        assert_eq!(f.partial_y(), CoefficientField::scalar(-3.0));
        // only the x coefficient depends on z
        assert_eq!(f.partial_z(), CoefficientField::monomial(1, 0, Jet3::new(1.0, 0.0, 0.0, 0.0)));
        assert_eq!(f.degree(), Some(1));
    }

    #[test]
    fn products_and_evaluation() {
        let f = xy();
        let g = &f * &f;
        assert_eq!(g.degree(), Some(2));
        let (x, y) = (0.7, -1.3);
        let fv = f.value(x, y);
        assert!((g.value(x, y) - fv * fv).abs() < 1e-14);
        // ∂x (f²) = 2 f ∂x f
        let lhs = g.partial_x().value(x, y);
        assert!((lhs - 2.0 * fv * 2.0).abs() < 1e-13);
    }

    #[test]
    fn cancellation_prunes_terms() {
        let f = xy();
        assert!((&f - &f).is_zero());
        assert_eq!((&f - &f).degree(), None);
    }
}
