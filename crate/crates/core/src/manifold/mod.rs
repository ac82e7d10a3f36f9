//! The model spaces `M̃(1 − λ², 2(1 ± λ))` on `ℝ² × I`.
//!
//! The orthonormal frame is
//!
//! ```text
//! e₁ = ∂x,   e₂ = ∂y,
//! e₃ = (±2y + f(z)) ∂x + (2λx − (λ′/2λ) y + h(z)) ∂y + ∂z
//! ```
//!
//! with `ξ = e₁`, `η` dual to `e₁`, `φe₁ = 0`, `φe₂ = ±e₃`, `φe₃ = ∓e₂`. One
//! [`SignChoice`] fixes every double sign at once.

mod contact;
pub mod field;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use contact::{contact_at, verify_structure, ContactStructure, StructureResiduals};
pub use field::{CoefficientField, CoordinateField, FrameField};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::jets::{Jet3, LambdaFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignChoice {
    Plus,
    Minus,
}

impl SignChoice {
    pub fn value(self) -> f64 {
        match self {
            SignChoice::Plus => 1.0,
            SignChoice::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            SignChoice::Plus => SignChoice::Minus,
            SignChoice::Minus => SignChoice::Plus,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SignChoice::Plus => "plus",
            SignChoice::Minus => "minus",
        }
    }
}

impl fmt::Display for SignChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One of the arbitrary functions `f(z)`, `h(z)` in the third frame vector.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum GaugeFunction {
    #[default]
    Zero,
    /// `Σ coeffs[k] z^k`.
    Poly(Vec<f64>),
    Sin,
}

impl GaugeFunction {
    pub fn eval(&self, z: f64) -> Jet3 {
        match self {
            GaugeFunction::Zero => Jet3::ZERO,
            GaugeFunction::Poly(coeffs) => {
                let var = Jet3::variable(z);
                coeffs.iter().rev().fold(Jet3::ZERO, |acc, &c| acc * var + Jet3::constant(c))
            }
            GaugeFunction::Sin => Jet3::variable(z).sin(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GaugeFunctions {
    pub f: GaugeFunction,
    pub h: GaugeFunction,
}

impl GaugeFunctions {
    /// The nonzero pair `f = sin z`, `h = z` used for gauge-independence checks.
    pub fn test_pair() -> Self {
        Self { f: GaugeFunction::Sin, h: GaugeFunction::Poly(vec![0.0, 1.0]) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpace {
    pub family: LambdaFamily,
    pub sign: SignChoice,
    pub gauges: GaugeFunctions,
}

impl ModelSpace {
    pub fn new(family: LambdaFamily, sign: SignChoice) -> Self {
        Self { family, sign, gauges: GaugeFunctions::default() }
    }

    pub fn with_gauges(mut self, gauges: GaugeFunctions) -> Self {
        self.gauges = gauges;
        self
    }

    pub fn lambda(&self, z: f64) -> Result<Jet3> {
        self.family.eval(z)
    }

    /// Coordinate components of `e₁, e₂, e₃` as fields over the slice at height `z`.
    pub fn frame_fields(&self, z: f64) -> Result<[CoordinateField; 3]> {
        let lambda = self.lambda(z)?;
        let s = self.sign.value();
        // −λ′/(2λ)
        let y_slope = lambda.derivative().try_div(lambda.scale(-2.0))?;
        let one = CoefficientField::scalar(1.0);
        let zero = CoefficientField::zero;
        let e1 = CoordinateField([one.clone(), zero(), zero()]);
        let e2 = CoordinateField([zero(), one.clone(), zero()]);
        let e3 = CoordinateField([
            CoefficientField::affine(self.gauges.f.eval(z), Jet3::ZERO, Jet3::constant(2.0 * s)),
            CoefficientField::affine(self.gauges.h.eval(z), lambda.scale(2.0), y_slope),
            one,
        ]);
        Ok([e1, e2, e3])
    }
}

/// A point `(x, y, z)` of `ℝ² × I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }
}

/// Tangent vector by its components in the orthonormal frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FrameVector {
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
}

impl FrameVector {
    pub const fn new(u1: f64, u2: f64, u3: f64) -> Self {
        Self { u1, u2, u3 }
    }

    pub fn basis(i: usize) -> Self {
        let mut a = [0.0; 3];
        a[i] = 1.0;
        Self::from_array(a)
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.u1, self.u2, self.u3]
    }

    pub fn dot(self, o: FrameVector) -> f64 {
        self.u1 * o.u1 + self.u2 * o.u2 + self.u3 * o.u3
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(self) -> f64 {
        self.u1.abs().max(self.u2.abs()).max(self.u3.abs())
    }
}

impl Add for FrameVector {
    type Output = FrameVector;
    fn add(self, o: FrameVector) -> FrameVector {
        FrameVector::new(self.u1 + o.u1, self.u2 + o.u2, self.u3 + o.u3)
    }
}

impl Sub for FrameVector {
    type Output = FrameVector;
    fn sub(self, o: FrameVector) -> FrameVector {
        FrameVector::new(self.u1 - o.u1, self.u2 - o.u2, self.u3 - o.u3)
    }
}

impl Neg for FrameVector {
    type Output = FrameVector;
    fn neg(self) -> FrameVector {
        -1.0 * self
    }
}

impl Mul<FrameVector> for f64 {
    type Output = FrameVector;
    fn mul(self, v: FrameVector) -> FrameVector {
        FrameVector::new(self * v.u1, self * v.u2, self * v.u3)
    }
}

/// Coordinate components of `e₁, e₂, e₃` at `p`, one row per frame vector.
pub fn frame_at(space: &ModelSpace, p: Point) -> Result<[[f64; 3]; 3]> {
    let frame = space.frame_fields(p.z)?;
    Ok(frame.map(|e| e.value(p.x, p.y)))
}

/// Frame components of a coordinate vector at `p`.
///
/// The frame matrix is unit triangular (`e₃` is the only vector with a `∂z`
/// part), so the inversion is exact back-substitution.
pub fn coordinate_to_frame(space: &ModelSpace, p: Point, v: [f64; 3]) -> Result<FrameVector> {
    let [_, _, e3] = frame_at(space, p)?;
    let u3 = v[2];
    Ok(FrameVector::new(v[0] - e3[0] * u3, v[1] - e3[1] * u3, u3))
}

/// Coordinate components of a frame vector at `p`.
pub fn frame_to_coordinate(space: &ModelSpace, p: Point, v: FrameVector) -> Result<[f64; 3]> {
    let rows = frame_at(space, p)?;
    let u = v.to_array();
    Ok([0, 1, 2].map(|c| (0..3).map(|i| u[i] * rows[i][c]).sum()))
}
