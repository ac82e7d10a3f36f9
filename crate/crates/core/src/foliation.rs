//! Families `λ` for which every leaf `z = c` is a proper biharmonic surface.
//!
//! Such `λ` solve the first-order equation
//!
//! ```text
//! (λ′)² = β λ⁴ + 16 λ⁴ ln λ ∓ 32 λ³ − 8 λ²        (∓ opposite to the sign of the space)
//! ```
//!
//! Differentiating gives `λ″ = ½ d(rhs)/dλ`, and then
//! `λλ″ − 2(λ′)² − 8λ²(1 ± λ)² = −2((λ′)² − rhs(λ))` holds identically, so the
//! surface criterion along a trajectory equals `−2` times the first-integral drift.
//!
//! Trajectories are integrated as the second-order system `(λ, λ′)′ = (λ′, ½ rhs′(λ))`
//! with fixed-step classical RK4. The first-order form `λ′ = ±√rhs` would conserve the
//! first integral by construction and leave nothing to measure.

use std::fmt;

use serde::Serialize;

use crate::biharmonic::surface_criterion;
use crate::error::{Error, Result};
use crate::jets::{LambdaFamily, TableFamily, TableSample};
use crate::manifold::{ModelSpace, SignChoice};

/// Trajectories stop as `diverged` once `λ` exceeds this.
pub const LAMBDA_CEILING: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Increasing,
    Decreasing,
}

impl Branch {
    fn sigma(self) -> f64 {
        match self {
            Branch::Increasing => 1.0,
            Branch::Decreasing => -1.0,
        }
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "increasing" => Ok(Branch::Increasing),
            "decreasing" => Ok(Branch::Decreasing),
            other => Err(Error::InvalidArgument(format!("branch must be increasing or decreasing, got {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FoliationParams {
    /// Integration constant `β` of the first integral.
    pub beta_const: f64,
    pub sign: SignChoice,
    pub lambda0: f64,
    pub z0: f64,
    pub step: f64,
    pub span: f64,
    pub branch: Branch,
}

impl FoliationParams {
    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if !(self.lambda0 > 0.0) || !self.lambda0.is_finite() {
            bad.push(format!("lambda0 = {} must be positive", self.lambda0));
        }
        if !(self.step > 0.0) || !self.step.is_finite() {
            bad.push(format!("step = {} must be positive", self.step));
        }
        if !(self.span > 0.0) || !self.span.is_finite() {
            bad.push(format!("span = {} must be positive", self.span));
        }
        if !self.beta_const.is_finite() || !self.z0.is_finite() {
            bad.push("beta and z0 must be finite".to_string());
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(bad.join("; ")))
        }
    }

    pub fn with_step(self, step: f64) -> Self {
        Self { step, ..self }
    }
}

/// `βλ⁴ + 16λ⁴ ln λ ∓ 32λ³ − 8λ²`.
pub fn foliation_rhs(lambda: f64, params: &FoliationParams) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("foliation rhs needs λ > 0, got {lambda}")));
    }
    Ok(rhs(lambda, params.beta_const, params.sign.value()))
}

fn rhs(l: f64, beta: f64, s: f64) -> f64 {
    let l2 = l * l;
    l2 * (l2 * (beta + 16.0 * l.ln()) - 32.0 * s * l - 8.0)
}

/// `½ d(rhs)/dλ = 2βλ³ + 32λ³ ln λ + 8λ³ − 48sλ² − 8λ`.
fn half_rhs_prime(l: f64, beta: f64, s: f64) -> f64 {
    l * (l * (l * (2.0 * beta + 32.0 * l.ln() + 8.0) - 48.0 * s) - 8.0)
}

/// `½ d²(rhs)/dλ² = 6βλ² + 96λ² ln λ + 56λ² − 96sλ − 8`.
fn half_rhs_second(l: f64, beta: f64, s: f64) -> f64 {
    l * (l * (6.0 * beta + 96.0 * l.ln() + 56.0) - 96.0 * s) - 8.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    SpanExhausted,
    /// `rhs` reached zero (a turning point where `λ′` changes sign) or was not positive at the start.
    RhsNonpositive,
    LambdaNonpositive,
    /// `λ` or `λ′` became non-finite or exceeded [`LAMBDA_CEILING`].
    Diverged,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::SpanExhausted => "span_exhausted",
            Termination::RhsNonpositive => "rhs_nonpositive",
            Termination::LambdaNonpositive => "lambda_nonpositive",
            Termination::Diverged => "diverged",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OdeSample {
    pub z: f64,
    pub lambda: f64,
    pub lambda_prime: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OdeSolution {
    pub params: FoliationParams,
    pub samples: Vec<OdeSample>,
    pub termination: Termination,
}

/// One CSV row of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FoliationRow {
    pub z: f64,
    pub lambda: f64,
    pub lambda_prime: f64,
    pub rhs: f64,
    #[serde(rename = "F_surf")]
    pub f_surf: f64,
}

impl OdeSolution {
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    fn second(&self, l: f64) -> f64 {
        half_rhs_prime(l, self.params.beta_const, self.params.sign.value())
    }

    /// `max |(λ′)² − rhs(λ)|` over the samples.
    pub fn drift(&self) -> f64 {
        let (beta, s) = (self.params.beta_const, self.params.sign.value());
        self.samples
            .iter()
            .map(|p| (p.lambda_prime * p.lambda_prime - rhs(p.lambda, beta, s)).abs())
            .fold(0.0, f64::max)
    }

    /// Length in `z` actually covered.
    pub fn extent(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => b.z - a.z,
            _ => 0.0,
        }
    }

    /// Drift divided by the covered length (at least one unit).
    pub fn drift_per_unit_z(&self) -> f64 {
        self.drift() / self.extent().max(1.0)
    }

    pub fn rows(&self) -> Vec<FoliationRow> {
        let (beta, s) = (self.params.beta_const, self.params.sign.value());
        self.samples
            .iter()
            .map(|p| {
                let r = rhs(p.lambda, beta, s);
                let second = self.second(p.lambda);
                let f_surf = p.lambda * second
                    - 2.0 * p.lambda_prime * p.lambda_prime
                    - 8.0 * p.lambda * p.lambda * (1.0 + s * p.lambda).powi(2);
                FoliationRow { z: p.z, lambda: p.lambda, lambda_prime: p.lambda_prime, rhs: r, f_surf }
            })
            .collect()
    }

    /// Interpolating family through the samples, with `λ″ = ½ rhs′(λ)` and
    /// `λ‴ = ½ rhs″(λ) λ′` at the nodes.
    pub fn table_family(&self) -> Result<LambdaFamily> {
        if self.samples.len() < 2 {
            return Err(Error::InvalidArgument("trajectory has fewer than two samples".into()));
        }
        let samples = self
            .samples
            .iter()
            .map(|p| TableSample {
                z: p.z,
                lambda: p.lambda,
                lambda_prime: p.lambda_prime,
                lambda_second: self.second(p.lambda),
                lambda_third: half_rhs_second(p.lambda, self.params.beta_const, self.params.sign.value()) * p.lambda_prime,
            })
            .collect();
        LambdaFamily::table(TableFamily::new(samples)?)
    }

    pub fn model_space(&self) -> Result<ModelSpace> {
        Ok(ModelSpace::new(self.table_family()?, self.params.sign))
    }
}

/// Integrates the trajectory forward from `z0` over `span`.
///
/// Stops early at a turning point (`λ′` changes sign or `rhs ≤ 0`), when `λ ≤ 0`,
/// or on divergence; the offending step is not recorded.
pub fn integrate_foliation(params: &FoliationParams) -> Result<OdeSolution> {
    params.validate()?;
    let (beta, s) = (params.beta_const, params.sign.value());
    let r0 = rhs(params.lambda0, beta, s);
    if !(r0 > 0.0) {
        return Ok(OdeSolution { params: *params, samples: Vec::new(), termination: Termination::RhsNonpositive });
    }
    let sigma = params.branch.sigma();
    let field = |l: f64, p: f64| (p, half_rhs_prime(l, beta, s));

    let steps = (params.span / params.step).round().max(1.0) as usize;
    let h = params.step;
    let mut samples = Vec::with_capacity(steps + 1);
    let (mut l, mut p) = (params.lambda0, sigma * r0.sqrt());
    samples.push(OdeSample { z: params.z0, lambda: l, lambda_prime: p });

    let mut termination = Termination::SpanExhausted;
    for i in 1..=steps {
        if l <= 0.0 || !l.is_finite() {
            break;
        }
        let k1 = field(l, p);
        let k2 = field(l + 0.5 * h * k1.0, p + 0.5 * h * k1.1);
        let k3 = field(l + 0.5 * h * k2.0, p + 0.5 * h * k2.1);
        let k4 = field(l + h * k3.0, p + h * k3.1);
        let nl = l + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        let np = p + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        if !nl.is_finite() || !np.is_finite() || nl > LAMBDA_CEILING {
            termination = Termination::Diverged;
            break;
        }
        if nl <= 0.0 {
            termination = Termination::LambdaNonpositive;
            break;
        }
        if np * sigma <= 0.0 || rhs(nl, beta, s) <= 0.0 {
            termination = Termination::RhsNonpositive;
            break;
        }
        l = nl;
        p = np;
        samples.push(OdeSample { z: params.z0 + h * i as f64, lambda: l, lambda_prime: p });
    }
    Ok(OdeSolution { params: *params, samples, termination })
}

/// Largest `|F_surf(c)|` over `cs`, with the point where it occurs.
pub fn verify_first_integral(space: &ModelSpace, cs: &[f64]) -> Result<(f64, f64)> {
    if cs.is_empty() {
        return Err(Error::InvalidArgument("no leaves to check".into()));
    }
    let mut worst = (0.0_f64, cs[0]);
    for &c in cs {
        let f = surface_criterion(space, c)?.abs();
        if !(f <= worst.0) {
            worst = (f, c);
        }
    }
    Ok(worst)
}

/// `n` leaves spread over the interior of a trajectory, avoiding the nodes.
pub fn interior_leaves(solution: &OdeSolution, n: usize) -> Vec<f64> {
    let (Some(a), Some(b)) = (solution.samples.first(), solution.samples.last()) else {
        return Vec::new();
    };
    let width = b.z - a.z;
    (0..n).map(|k| a.z + width * (k as f64 + 0.5 + 0.1 * std::f64::consts::FRAC_1_SQRT_2) / n as f64).collect()
}
