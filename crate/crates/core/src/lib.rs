//! Verification toolkit for the non-Sasakian generalized `(κ, μ)` model spaces
//! `M̃(1 − λ², 2(1 ± λ))`: contact structure, curvature, and biharmonicity of
//! their Legendre curves and anti-invariant leaves.

pub mod biharmonic;
pub mod checks;
pub mod cli;
pub mod error;
pub mod foliation;
pub mod jets;
pub mod manifold;
pub mod tensor;

pub use error::{Error, Result};
pub use jets::{Interval, Jet3, LambdaFamily};
pub use manifold::{FrameVector, ModelSpace, Point, SignChoice};
