//! Order-3 univariate jets and the `λ(z)` families that generate the model spaces.
//!
//! A [`Jet3`] stores a function value together with its first three derivatives
//! with respect to `z` (derivative form, not Taylor coefficients). All arithmetic
//! is exact truncated Taylor algebra, so every z-dependent quantity downstream
//! carries exact derivatives instead of finite-difference approximations.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use thiserror::Error;

use crate::error::{Error, Result};

/// Failure of a jet operation outside its domain.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("division by a jet with zero value: {operand}")]
    ZeroDivision { operand: Jet3 },
    #[error("{op} is undefined at {operand}")]
    Domain { op: &'static str, operand: Jet3 },
}

/// Value and first three z-derivatives of a scalar function at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet3 {
    pub v0: f64,
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
}

impl fmt::Display for Jet3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.v0, self.v1, self.v2, self.v3)
    }
}

impl Jet3 {
    pub const ZERO: Jet3 = Jet3::constant(0.0);
    pub const ONE: Jet3 = Jet3::constant(1.0);

    pub const fn new(v0: f64, v1: f64, v2: f64, v3: f64) -> Self {
        Self { v0, v1, v2, v3 }
    }

    pub const fn constant(v: f64) -> Self {
        Self::new(v, 0.0, 0.0, 0.0)
    }

    /// The identity function `z ↦ z` at `z`.
    pub const fn variable(z: f64) -> Self {
        Self::new(z, 1.0, 0.0, 0.0)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.v0, self.v1, self.v2, self.v3]
    }

    pub fn is_zero(&self) -> bool {
        self.v0 == 0.0 && self.v1 == 0.0 && self.v2 == 0.0 && self.v3 == 0.0
    }

    /// Jet of the derivative `f′`.
    ///
    /// The fourth derivative of `f` is not stored, so the top coefficient of the
    /// result is set to zero and must not be consumed.
    pub fn derivative(self) -> Self {
        Self::new(self.v1, self.v2, self.v3, 0.0)
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(k * self.v0, k * self.v1, k * self.v2, k * self.v3)
    }

    /// Composition `g ∘ self`, where `g` holds `g(u), g′(u), g″(u), g‴(u)` at `u = self.v0`.
    pub fn compose(self, g: [f64; 4]) -> Self {
        let (f1, f2, f3) = (self.v1, self.v2, self.v3);
        Self::new(
            g[0],
            g[1] * f1,
            g[2] * f1 * f1 + g[1] * f2,
            g[3] * f1 * f1 * f1 + 3.0 * g[2] * f1 * f2 + g[1] * f3,
        )
    }

    pub fn recip(self) -> std::result::Result<Self, JetError> {
        let u = self.v0;
        if u == 0.0 {
            return Err(JetError::ZeroDivision { operand: self });
        }
        let r = 1.0 / u;
        Ok(self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r]))
    }

    pub fn try_div(self, rhs: Jet3) -> std::result::Result<Self, JetError> {
        if rhs.v0 == 0.0 {
            return Err(JetError::ZeroDivision { operand: rhs });
        }
        Ok(self * rhs.recip()?)
    }

    pub fn ln(self) -> std::result::Result<Self, JetError> {
        let u = self.v0;
        if !(u > 0.0) {
            return Err(JetError::Domain { op: "ln", operand: self });
        }
        let r = 1.0 / u;
        Ok(self.compose([u.ln(), r, -r * r, 2.0 * r * r * r]))
    }

    pub fn sqrt(self) -> std::result::Result<Self, JetError> {
        let u = self.v0;
        if !(u > 0.0) {
            return Err(JetError::Domain { op: "sqrt", operand: self });
        }
        let s = u.sqrt();
        Ok(self.compose([s, 0.5 / s, -0.25 / (s * u), 0.375 / (s * u * u)]))
    }

    /// `self^p` for real `p`.
    ///
    /// Fractional exponents need a positive base. Integer exponents accept any
    /// base except zero when a derivative would involve a negative power.
    pub fn powf(self, p: f64) -> std::result::Result<Self, JetError> {
        let u = self.v0;
        let integral = p.fract() == 0.0;
        if !integral && !(u > 0.0) {
            return Err(JetError::Domain { op: "pow", operand: self });
        }
        let mut g = [0.0; 4];
        let mut falling = 1.0;
        for (k, slot) in g.iter_mut().enumerate() {
            if falling != 0.0 {
                let e = p - k as f64;
                if u == 0.0 && e < 0.0 {
                    return Err(JetError::Domain { op: "pow", operand: self });
                }
                *slot = falling * if integral { u.powi(e as i32) } else { u.powf(e) };
            }
            falling *= p - k as f64;
        }
        Ok(self.compose(g))
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.v0.sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.v0.sin_cos();
        self.compose([c, -s, -c, s])
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(self, r: Jet3) -> Jet3 {
        Jet3::new(self.v0 + r.v0, self.v1 + r.v1, self.v2 + r.v2, self.v3 + r.v3)
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, r: Jet3) -> Jet3 {
        Jet3::new(self.v0 - r.v0, self.v1 - r.v1, self.v2 - r.v2, self.v3 - r.v3)
    }
}

impl AddAssign for Jet3 {
    fn add_assign(&mut self, r: Jet3) {
        *self = *self + r;
    }
}

impl SubAssign for Jet3 {
    fn sub_assign(&mut self, r: Jet3) {
        *self = *self - r;
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        self.scale(-1.0)
    }
}

impl Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, g: Jet3) -> Jet3 {
        let f = self;
        Jet3::new(
            f.v0 * g.v0,
            f.v1 * g.v0 + f.v0 * g.v1,
            f.v2 * g.v0 + 2.0 * f.v1 * g.v1 + f.v0 * g.v2,
            f.v3 * g.v0 + 3.0 * f.v2 * g.v1 + 3.0 * f.v1 * g.v2 + f.v0 * g.v3,
        )
    }
}

impl Mul<f64> for Jet3 {
    type Output = Jet3;
    fn mul(self, k: f64) -> Jet3 {
        self.scale(k)
    }
}

impl Mul<Jet3> for f64 {
    type Output = Jet3;
    fn mul(self, j: Jet3) -> Jet3 {
        j.scale(self)
    }
}

/// Open interval `(lo, hi)` of z values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || lo.is_nan() || hi.is_nan() {
            return Err(Error::InvalidFamily(format!("empty interval ({lo}, {hi})")));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, z: f64) -> bool {
        self.lo < z && z < self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// The middle `fraction` of the interval, e.g. `0.8` trims 10% from each side.
    pub fn interior(&self, fraction: f64) -> Interval {
        let trim = 0.5 * (1.0 - fraction) * self.width();
        Interval { lo: self.lo + trim, hi: self.hi - trim }
    }

    pub fn check(&self, z: f64) -> Result<()> {
        if self.contains(z) {
            Ok(())
        } else {
            Err(Error::Domain { z, lo: self.lo, hi: self.hi })
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Width of the default working domain of the closed-form families.
pub const DEFAULT_DOMAIN_WIDTH: f64 = 12.0;

/// One node of a tabulated `λ`: value and first three derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableSample {
    pub z: f64,
    pub lambda: f64,
    pub lambda_prime: f64,
    pub lambda_second: f64,
    pub lambda_third: f64,
}

/// Piecewise quintic through [`TableSample`]s, anchored at the left node of each piece.
///
/// On each piece `λ″` is the cubic Hermite interpolant of `(λ″, λ‴)` at both
/// nodes, integrated twice from the left node's `λ` and `λ′`. Forcing the
/// values at both ends instead would amplify their rounding by `1/h²` in `λ″`;
/// this way `λ` and `λ′` match the right node only to the accuracy of the data,
/// which [`TableFamily::eval_with_estimate`] reports.
#[derive(Debug, Clone, PartialEq)]
pub struct TableFamily {
    samples: Vec<TableSample>,
}

impl TableFamily {
    pub fn new(samples: Vec<TableSample>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidFamily("a table needs at least two samples".into()));
        }
        if samples.windows(2).any(|w| !(w[0].z < w[1].z)) {
            return Err(Error::InvalidFamily("table nodes must be strictly increasing in z".into()));
        }
        if let Some(s) = samples.iter().find(|s| !(s.lambda > 0.0)) {
            return Err(Error::InvalidFamily(format!("table value λ({}) = {} is not positive", s.z, s.lambda)));
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[TableSample] {
        &self.samples
    }

    fn piece_index(&self, z: f64) -> usize {
        let last = self.samples.len() - 2;
        match self.samples.binary_search_by(|s| s.z.total_cmp(&z)) {
            Ok(i) => i.min(last),
            Err(i) => i.saturating_sub(1).min(last),
        }
    }

    fn eval_piece(&self, i: usize, z: f64) -> Jet3 {
        let (a, b) = (self.samples[i], self.samples[i + 1]);
        let h = b.z - a.z;
        let t = (z - a.z) / h;
        let (f0, d0, s0, t0) = (a.lambda, h * a.lambda_prime, h * h * a.lambda_second, h * h * h * a.lambda_third);
        let (s1, t1) = (h * h * b.lambda_second, h * h * h * b.lambda_third);
        let (c2, c3) = (0.5 * s0, t0 / 6.0);
        let rc = s1 - 2.0 * c2 - 6.0 * c3;
        let rd = t1 - 6.0 * c3;
        let c5 = (rd - 2.0 * rc) / 20.0;
        let c4 = (rc - 20.0 * c5) / 12.0;
        let c = [f0, d0, c2, c3, c4, c5];
        let p = |t: f64| c.iter().rev().fold(0.0, |acc, &ck| acc * t + ck);
        let p1 = |t: f64| c[1] + t * (2.0 * c[2] + t * (3.0 * c[3] + t * (4.0 * c[4] + t * 5.0 * c[5])));
        let p2 = |t: f64| 2.0 * c[2] + t * (6.0 * c[3] + t * (12.0 * c[4] + t * 20.0 * c[5]));
        let p3 = |t: f64| 6.0 * c[3] + t * (24.0 * c[4] + t * 60.0 * c[5]);
        Jet3::new(p(t), p1(t) / h, p2(t) / (h * h), p3(t) / (h * h * h))
    }

    /// Interpolated jet and a local error estimate: the largest discrepancy in
    /// orders 0..=2 between the containing piece and its neighbour extrapolated to `z`.
    pub fn eval_with_estimate(&self, z: f64) -> (Jet3, f64) {
        let i = self.piece_index(z);
        let jet = self.eval_piece(i, z);
        let neighbour = if i + 2 < self.samples.len() {
            Some(i + 1)
        } else if i > 0 {
            Some(i - 1)
        } else {
            None
        };
        let estimate = neighbour.map_or(0.0, |j| {
            let other = self.eval_piece(j, z);
            [(jet.v0 - other.v0), (jet.v1 - other.v1), (jet.v2 - other.v2)]
                .iter()
                .fold(0.0_f64, |m, d| m.max(d.abs()))
        });
        (jet, estimate)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilyKind {
    /// `λ = z^{-n}` on `z > 0`.
    Power { n: f64 },
    /// `λ = √(1 − a z − b)` where the radicand is positive.
    SqrtLinear { a: f64, b: f64 },
    /// Constant `λ`; only useful as a degenerate control.
    Constant { value: f64 },
    Table(TableFamily),
}

/// A positive generating function `λ(z)` on an open working interval.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaFamily {
    pub kind: FamilyKind,
    pub domain: Interval,
}

impl LambdaFamily {
    pub fn power(n: f64) -> Result<Self> {
        Self::with_domain(FamilyKind::Power { n }, Interval { lo: 0.0, hi: DEFAULT_DOMAIN_WIDTH })
    }

    pub fn sqrt_linear(a: f64, b: f64) -> Result<Self> {
        let domain = if a == 0.0 {
            let half = 0.5 * DEFAULT_DOMAIN_WIDTH;
            Interval { lo: -half, hi: half }
        } else {
            let edge = (1.0 - b) / a;
            if a > 0.0 {
                Interval { lo: edge - DEFAULT_DOMAIN_WIDTH / a, hi: edge }
            } else {
                Interval { lo: edge, hi: edge - DEFAULT_DOMAIN_WIDTH / a }
            }
        };
        Self::with_domain(FamilyKind::SqrtLinear { a, b }, domain)
    }

    pub fn constant(value: f64) -> Result<Self> {
        let half = 0.5 * DEFAULT_DOMAIN_WIDTH;
        Self::with_domain(FamilyKind::Constant { value }, Interval { lo: -half, hi: half })
    }

    pub fn table(table: TableFamily) -> Result<Self> {
        let s = table.samples();
        let domain = Interval::new(s[0].z, s[s.len() - 1].z)?;
        // Nodes at the ends are usable, so widen by a hair to keep them inside.
        let pad = 1e-12 * domain.width();
        let domain = Interval { lo: domain.lo - pad, hi: domain.hi + pad };
        Self::with_domain(FamilyKind::Table(table), domain)
    }

    /// Builds a family on an explicit domain, rejecting domains where `λ` is not positive.
    pub fn with_domain(kind: FamilyKind, domain: Interval) -> Result<Self> {
        let domain = Interval::new(domain.lo, domain.hi)?;
        match &kind {
            FamilyKind::Power { n } => {
                if !n.is_finite() {
                    return Err(Error::InvalidFamily(format!("power exponent {n} is not finite")));
                }
                if domain.lo < 0.0 {
                    return Err(Error::InvalidFamily(format!("power family needs z > 0, got domain {domain}")));
                }
            }
            FamilyKind::SqrtLinear { a, b } => {
                // The ends are open, so a radicand that vanishes there up to rounding is fine.
                let short = |z: f64| 1.0 - a * z - b < -1e-12 * (1.0 + (a * z).abs() + b.abs());
                if !a.is_finite() || !b.is_finite() || short(domain.lo) || short(domain.hi) {
                    return Err(Error::InvalidFamily(format!(
                        "1 - {a} z - {b} must be positive on {domain}"
                    )));
                }
            }
            FamilyKind::Constant { value } => {
                if !(*value > 0.0) || !value.is_finite() {
                    return Err(Error::InvalidFamily(format!("constant λ = {value} must be positive")));
                }
            }
            FamilyKind::Table(_) => {}
        }
        Ok(Self { kind, domain })
    }

    pub fn is_constant(&self) -> bool {
        match self.kind {
            FamilyKind::Constant { .. } => true,
            FamilyKind::Power { n } => n == 0.0,
            FamilyKind::SqrtLinear { a, .. } => a == 0.0,
            FamilyKind::Table(_) => false,
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            FamilyKind::Power { n } => format!("power(n={n})"),
            FamilyKind::SqrtLinear { a, b } => format!("sqrt_linear(a={a}, b={b})"),
            FamilyKind::Constant { value } => format!("constant({value})"),
            FamilyKind::Table(t) => format!("table({} samples)", t.samples().len()),
        }
    }

    /// `λ(z), λ′(z), λ″(z), λ‴(z)`.
    pub fn eval(&self, z: f64) -> Result<Jet3> {
        self.domain.check(z)?;
        Ok(match &self.kind {
            FamilyKind::Power { n } => {
                let n = *n;
                let l = z.powf(-n);
                Jet3::new(
                    l,
                    -n * l / z,
                    n * (n + 1.0) * l / (z * z),
                    -n * (n + 1.0) * (n + 2.0) * l / (z * z * z),
                )
            }
            FamilyKind::SqrtLinear { a, b } => {
                let u = 1.0 - a * z - b;
                if !(u > 0.0) {
                    return Err(Error::Domain { z, lo: self.domain.lo, hi: self.domain.hi });
                }
                let s = u.sqrt();
                Jet3::new(s, -a / (2.0 * s), -a * a / (4.0 * s * u), -3.0 * a * a * a / (8.0 * s * u * u))
            }
            FamilyKind::Constant { value } => Jet3::constant(*value),
            FamilyKind::Table(t) => t.eval_with_estimate(z).0,
        })
    }
}

/// Free-function form of [`LambdaFamily::eval`].
pub fn eval_family(family: &LambdaFamily, z: f64) -> Result<Jet3> {
    family.eval(z)
}

/// Worst relative discrepancy between the jet's derivatives and central
/// differences of the next-lower stored order.
///
/// Order `k` is compared with `(v_{k-1}(z + step) − v_{k-1}(z − step)) / (2 step)`,
/// relative to `max(1, |v_k|)`.
pub fn fd_crosscheck(family: &LambdaFamily, z: f64, step: f64) -> Result<f64> {
    for probe in [z - 3.0 * step, z + 3.0 * step] {
        family.domain.check(probe)?;
    }
    let centre = family.eval(z)?.to_array();
    let plus = family.eval(z + step)?.to_array();
    let minus = family.eval(z - step)?.to_array();
    let mut worst = 0.0_f64;
    for k in 1..4 {
        let fd = (plus[k - 1] - minus[k - 1]) / (2.0 * step);
        let rel = (fd - centre[k]).abs() / centre[k].abs().max(1.0);
        worst = worst.max(rel);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn close(a: Jet3, b: [f64; 4], tol: f64) {
        for (x, y) in a.to_array().iter().zip(b) {
            assert_abs_diff_eq!(*x, y, epsilon = tol);
        }
    }

    #[test]
    fn constant_family_has_flat_jet() {
        let f = LambdaFamily::constant(2.0).unwrap();
        assert_eq!(f.eval(5.0).unwrap(), Jet3::new(2.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn power_one_at_one() {
        let f = LambdaFamily::power(1.0).unwrap();
        close(f.eval(1.0).unwrap(), [1.0, -1.0, 2.0, -6.0], 1e-15);
    }

    #[test]
    fn power_one_matches_finite_differences_of_values() {
        // Independent check straight from z^{-1} values.
        let g = |z: f64| 1.0 / z;
        let h = 1e-5;
        let d1 = (g(1.0 + h) - g(1.0 - h)) / (2.0 * h);
        let d2 = (g(1.0 + h) - 2.0 * g(1.0) + g(1.0 - h)) / (h * h);
        assert_abs_diff_eq!(d1, -1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(d2, 2.0, epsilon = 1e-4);
    }

    #[test]
    fn sqrt_linear_with_zero_slope_is_constant() {
        let f = LambdaFamily::sqrt_linear(0.0, 0.75).unwrap();
        close(f.eval(3.0).unwrap(), [0.5, 0.0, 0.0, 0.0], 1e-15);
    }

    #[test]
    fn outside_domain_names_the_interval() {
        let f = LambdaFamily::power(0.5).unwrap();
        let err = f.eval(-1.0).unwrap_err();
        assert!(matches!(err, Error::Domain { lo, hi, .. } if lo == 0.0 && hi == DEFAULT_DOMAIN_WIDTH));
        assert!(err.to_string().contains("(0, 12)"));
    }

    #[test]
    fn invalid_families_are_rejected() {
        assert!(LambdaFamily::constant(0.0).is_err());
        assert!(LambdaFamily::with_domain(FamilyKind::Power { n: 0.5 }, Interval { lo: -1.0, hi: 1.0 }).is_err());
        assert!(LambdaFamily::with_domain(FamilyKind::SqrtLinear { a: 1.0, b: 0.0 }, Interval { lo: 0.0, hi: 2.0 }).is_err());
    }

    #[test]
    fn arithmetic_examples() {
        let a = Jet3::new(1.0, 2.0, 3.0, 4.0);
        let b = Jet3::new(5.0, 6.0, 7.0, 8.0);
        assert_eq!(a + b, Jet3::new(6.0, 8.0, 10.0, 12.0));
        let z = Jet3::variable(3.0);
        assert_eq!(z * z, Jet3::new(9.0, 6.0, 2.0, 0.0));
        close(Jet3::variable(1.0).ln().unwrap(), [0.0, 1.0, -1.0, 2.0], 1e-15);
    }

    #[test]
    fn domain_violations_carry_the_operand() {
        let zero = Jet3::new(0.0, 1.0, 0.0, 0.0);
        assert_eq!(Jet3::ONE.try_div(zero), Err(JetError::ZeroDivision { operand: zero }));
        assert!(matches!(zero.recip(), Err(JetError::ZeroDivision { .. })));
        assert!(matches!(Jet3::constant(-1.0).ln(), Err(JetError::Domain { op: "ln", .. })));
        assert!(matches!(Jet3::constant(-1.0).sqrt(), Err(JetError::Domain { op: "sqrt", .. })));
        assert!(matches!(Jet3::constant(-1.0).powf(0.5), Err(JetError::Domain { op: "pow", .. })));
        // integer powers of negative bases are fine
        close(Jet3::variable(-2.0).powf(3.0).unwrap(), [-8.0, 12.0, -12.0, 6.0], 1e-12);
        close(Jet3::variable(0.0).powf(2.0).unwrap(), [0.0, 0.0, 2.0, 0.0], 0.0);
    }

    #[test]
    fn sqrt_and_pow_agree() {
        let u = Jet3::new(2.0, 0.3, -0.7, 1.1);
        let a = u.sqrt().unwrap();
        let b = u.powf(0.5).unwrap();
        close(a, b.to_array(), 1e-14);
    }

    #[test]
    fn fd_crosscheck_examples() {
        let p = LambdaFamily::power(0.5).unwrap();
        assert!(fd_crosscheck(&p, 1.0, 1e-4).unwrap() < 1e-6);
        let c = LambdaFamily::constant(1.0).unwrap();
        assert_eq!(fd_crosscheck(&c, 0.3, 1e-3).unwrap(), 0.0);
        let s = LambdaFamily::sqrt_linear(1.0, 0.0).unwrap();
        assert!(fd_crosscheck(&s, 0.5, 1e-5).unwrap() < 1e-6);
        assert!(fd_crosscheck(&p, 1e-4, 1e-4).is_err());
    }

    #[test]
    fn table_reproduces_a_quintic_exactly() {
        let q = |z: f64| {
            [
                1.0 + z + 0.5 * z.powi(3) - 0.1 * z.powi(5),
                1.0 + 1.5 * z * z - 0.5 * z.powi(4),
                3.0 * z - 2.0 * z.powi(3),
                3.0 - 6.0 * z * z,
            ]
        };
        let samples = (0..=10)
            .map(|i| {
                let z = 0.1 * i as f64;
                let [l, l1, l2, l3] = q(z);
                TableSample { z, lambda: l, lambda_prime: l1, lambda_second: l2, lambda_third: l3 }
            })
            .collect();
        let fam = LambdaFamily::table(TableFamily::new(samples).unwrap()).unwrap();
        let z = 0.437;
        let jet = fam.eval(z).unwrap();
        close(jet, q(z), 1e-10);
        if let FamilyKind::Table(t) = &fam.kind {
            assert!(t.eval_with_estimate(z).1 < 1e-10);
        }
    }
}
