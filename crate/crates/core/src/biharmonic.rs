//! Legendre curves `s ↦ (b, s, c)` and anti-invariant leaves `(x, y) ↦ (x, y, c)`.
//!
//! The bitension fields are computed from the frame connection and curvature
//! (the oracle). The closed-form criteria in `λ` are evaluated separately and
//! cross-checked against the oracle; neither is derived from the other.
//!
//! Frame convention for leaves: tangent frame `{e₁ = ξ, e₂}`, unit normal
//! `N = φe₂ = ±e₃`. The eigenvector called `e₁` in the usual `{ξ, e₁, φe₁}`
//! surface frame is `e₂` here.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jets::{Interval, Jet3};
use crate::manifold::{CoefficientField, FrameField, FrameVector, ModelSpace, Point};
use crate::tensor::{scalar_curvature, Geometry};

/// `|λ′|` below this counts as a geodesic curve or minimal leaf.
pub const LAMBDA_PRIME_ZERO: f64 = 1e-10;

/// Bracket width at which bisection stops.
pub const BISECTION_WIDTH: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegendreCurve {
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntiInvariantSurface {
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Submanifold {
    Curve,
    Surface,
}

impl Submanifold {
    pub fn name(self) -> &'static str {
        match self {
            Submanifold::Curve => "curve",
            Submanifold::Surface => "surface",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveGeometry {
    /// `∇_T T` with `T = e₂`.
    pub acceleration: FrameVector,
    pub geodesic_curvature: f64,
    /// `g(∇_T T, T)`, zero for a unit-speed curve.
    pub tangential_acceleration: f64,
}

pub fn curve_geometry(space: &ModelSpace, curve: LegendreCurve) -> Result<CurveGeometry> {
    let geo = Geometry::new(space, curve.c)?;
    let t = FrameField::basis(1);
    let acc = geo.covariant(&t, &t).value(curve.b, 0.0);
    Ok(CurveGeometry { acceleration: acc, geodesic_curvature: acc.norm(), tangential_acceleration: acc.u2 })
}

/// `τ₂ = ∇_T∇_T∇_T T + R(∇_T T, T)T` along the curve.
pub fn curve_bitension(space: &ModelSpace, curve: LegendreCurve) -> Result<FrameVector> {
    let geo = Geometry::new(space, curve.c)?;
    let t = FrameField::basis(1);
    let tension = geo.covariant(&t, &t);
    let third = geo.covariant(&t, &geo.covariant(&t, &tension));
    let curvature = geo.riemann(&tension, &t, &t);
    Ok((&third + &curvature).value(curve.b, 0.0))
}

fn criterion(space: &ModelSpace, c: f64, power: i32) -> Result<(f64, f64)> {
    let l = space.lambda(c)?;
    let s = space.sign.value();
    let lead = l.v0 * l.v2;
    let grad = 2.0 * l.v1 * l.v1;
    let potential = 8.0 * l.v0 * l.v0 * (1.0 + s * l.v0).powi(power);
    let scale = 1.0_f64.max(lead.abs()).max(grad).max(potential.abs());
    Ok((lead - grad - potential, scale))
}

/// `λλ″ − 2(λ′)² − 8λ²(1 ± λ)` at `z = c`.
pub fn curve_criterion(space: &ModelSpace, c: f64) -> Result<f64> {
    Ok(criterion(space, c, 1)?.0)
}

/// `λλ″ − 2(λ′)² − 8λ²(1 ± λ)²` at `z = c`.
pub fn surface_criterion(space: &ModelSpace, c: f64) -> Result<f64> {
    Ok(criterion(space, c, 2)?.0)
}

/// Criterion value and its natural size `max(1, |λλ″|, 2(λ′)², 8λ²|1 ± λ|^k)`.
pub fn criterion_with_scale(space: &ModelSpace, which: Submanifold, c: f64) -> Result<(f64, f64)> {
    criterion(space, c, if which == Submanifold::Curve { 1 } else { 2 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceGeometry {
    /// `B(E_i, E_j) = g(∇_{E_i} E_j, N)` for the tangent frame `{e₁, e₂}`.
    pub second_fundamental: [[f64; 2]; 2],
    /// `g(A_N E_i, E_j) = −g(∇_{E_i} N, E_j)`.
    pub shape_operator: [[f64; 2]; 2],
    /// Component of `H` along `N`.
    pub mean_curvature: f64,
    pub mean_curvature_sq: f64,
    /// `1 + g(he₂, e₂)`.
    pub beta_surface: f64,
    /// `g(he₂, φe₂)`.
    pub gamma_surface: f64,
    /// `ξ(g(he₂, φe₂))`.
    pub xi_gamma: f64,
}

struct Leaf {
    geo: Geometry,
    tangent: [FrameField; 2],
    normal: FrameField,
}

impl Leaf {
    fn new(space: &ModelSpace, c: f64) -> Result<Self> {
        let geo = Geometry::new(space, c)?;
        let tangent = [FrameField::basis(0), FrameField::basis(1)];
        let normal = geo.phi(&tangent[1]);
        Ok(Self { geo, tangent, normal })
    }

    fn second_fundamental(&self, i: usize, j: usize) -> CoefficientField {
        self.geo.covariant(&self.tangent[i], &self.tangent[j]).dot(&self.normal)
    }

    /// `H = ½ Σ B(E_i, E_i)`.
    fn mean_curvature_vector(&self) -> FrameField {
        let trace = &self.second_fundamental(0, 0) + &self.second_fundamental(1, 1);
        self.normal.times(&trace.scale(0.5))
    }

    fn tangential(&self, v: &FrameField) -> FrameField {
        v - &self.normal.times(&v.dot(&self.normal))
    }

    /// `τ₂ = −Δ_f τ + Σ R(τ, E_i)E_i` with `τ = 2H` and
    /// `Δ_f = −Σ (∇_{E_i}∇_{E_i} − ∇_{∇_{E_i}E_i})`.
    fn bitension(&self) -> FrameField {
        let geo = &self.geo;
        let tau = self.mean_curvature_vector().scale(2.0);
        let mut out = FrameField::zero();
        for e in &self.tangent {
            let rough = geo.covariant(e, &geo.covariant(e, &tau));
            let induced = self.tangential(&geo.covariant(e, e));
            let correction = geo.covariant(&induced, &tau);
            out = &out + &(&rough - &correction);
            out = &out + &geo.riemann(&tau, e, e);
        }
        out
    }
}

pub fn surface_geometry(space: &ModelSpace, surf: AntiInvariantSurface) -> Result<SurfaceGeometry> {
    let leaf = Leaf::new(space, surf.c)?;
    let geo = &leaf.geo;
    let (x, y) = (0.0, 0.0);
    let mut second_fundamental = [[0.0; 2]; 2];
    let mut shape_operator = [[0.0; 2]; 2];
    for i in 0..2 {
        let dn = geo.covariant(&leaf.tangent[i], &leaf.normal);
        for j in 0..2 {
            second_fundamental[i][j] = leaf.second_fundamental(i, j).value(x, y);
            shape_operator[i][j] = -dn.dot(&leaf.tangent[j]).value(x, y);
        }
    }
    let mean_curvature = 0.5 * (second_fundamental[0][0] + second_fundamental[1][1]);
    let e2 = &leaf.tangent[1];
    let he2 = geo.h(e2);
    let gamma_field = he2.dot(&geo.phi(e2));
    Ok(SurfaceGeometry {
        second_fundamental,
        shape_operator,
        mean_curvature,
        mean_curvature_sq: mean_curvature * mean_curvature,
        beta_surface: 1.0 + he2.dot(e2).value(x, y),
        gamma_surface: gamma_field.value(x, y),
        xi_gamma: geo.derivative(&geo.xi(), &gamma_field).value(x, y),
    })
}

pub fn surface_bitension(space: &ModelSpace, surf: AntiInvariantSurface) -> Result<FrameVector> {
    Ok(Leaf::new(space, surf.c)?.bitension().value(0.0, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RadicalSign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CharacterizationOutcome {
    Evaluated { residual: f64, radical_sign: RadicalSign },
    RadicandNegative,
}

/// `h(φH)` against `(±√(S/6 − 4|H|²/3) − 1) φH` on the leaf at `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharacterizationCheck {
    pub c: f64,
    pub scalar_curvature: f64,
    pub mean_curvature_sq: f64,
    /// `S/6 − 4|H|²/3`.
    pub radicand: f64,
    /// `β − 1` read off from `h(φH) = (β − 1)φH`.
    pub h_eigenvalue: f64,
    pub outcome: CharacterizationOutcome,
}

pub fn characterization_residual(space: &ModelSpace, c: f64) -> Result<CharacterizationCheck> {
    let leaf = Leaf::new(space, c)?;
    let geo = &leaf.geo;
    let l = geo.lambda();
    if l.v1.abs() < LAMBDA_PRIME_ZERO {
        return Err(Error::InvalidArgument(format!("leaf at c = {c} is minimal (λ′ = {})", l.v1)));
    }
    let (x, y) = (0.0, 0.0);
    let h_vec = leaf.mean_curvature_vector();
    let mean_sq = h_vec.dot(&h_vec).value(x, y);
    let scalar = scalar_curvature(space, Point::new(x, y, c))?;
    let radicand = scalar / 6.0 - 4.0 * mean_sq / 3.0;
    let phi_h = geo.phi(&h_vec);
    let h_phi_h = geo.h(&phi_h).value(x, y);
    let phi_h = phi_h.value(x, y);
    let h_eigenvalue = h_phi_h.dot(phi_h) / phi_h.dot(phi_h);
    let outcome = if radicand < 0.0 {
        CharacterizationOutcome::RadicandNegative
    } else {
        let root = radicand.sqrt();
        let res = |sigma: f64| (h_phi_h - (sigma * root - 1.0) * phi_h).norm();
        let (plus, minus) = (res(1.0), res(-1.0));
        if plus <= minus {
            CharacterizationOutcome::Evaluated { residual: plus, radical_sign: RadicalSign::Plus }
        } else {
            CharacterizationOutcome::Evaluated { residual: minus, radical_sign: RadicalSign::Minus }
        }
    };
    Ok(CharacterizationCheck { c, scalar_curvature: scalar, mean_curvature_sq: mean_sq, radicand, h_eigenvalue, outcome })
}

/// A root of a closed-form criterion, cross-checked by the bitension oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootRecord {
    pub which: Submanifold,
    pub bracket: (f64, f64),
    pub root: f64,
    /// `|F(root)|` divided by the criterion scale.
    pub criterion_residual: f64,
    pub lambda: f64,
    pub lambda_prime: f64,
    pub oracle_bitension_norm: f64,
}

pub fn bitension_norm(space: &ModelSpace, which: Submanifold, c: f64) -> Result<f64> {
    Ok(match which {
        Submanifold::Curve => curve_bitension(space, LegendreCurve { b: 0.0, c })?.norm(),
        Submanifold::Surface => surface_bitension(space, AntiInvariantSurface { c })?.norm(),
    })
}

/// Scans `grid_n + 1` equally spaced samples of `[interval.lo, interval.hi]`
/// for sign changes of the criterion and bisects each bracket until the scaled
/// criterion drops below `tol` or the bracket is narrower than
/// [`BISECTION_WIDTH`]. Roots where `|λ′| < LAMBDA_PRIME_ZERO` are geodesic or
/// minimal and are dropped.
pub fn find_roots(
    space: &ModelSpace,
    which: Submanifold,
    interval: Interval,
    grid_n: usize,
    tol: f64,
) -> Result<Vec<RootRecord>> {
    if grid_n < 2 {
        return Err(Error::InvalidArgument(format!("grid needs at least 2 cells, got {grid_n}")));
    }
    space.family.domain.check(interval.lo)?;
    space.family.domain.check(interval.hi)?;
    let f = |c: f64| criterion_with_scale(space, which, c);
    let step = interval.width() / grid_n as f64;
    let grid: Vec<f64> = (0..=grid_n).map(|i| if i == grid_n { interval.hi } else { interval.lo + step * i as f64 }).collect();
    let values = grid.iter().map(|&c| f(c).map(|v| v.0)).collect::<Result<Vec<_>>>()?;

    let mut brackets = Vec::new();
    for i in 0..grid_n {
        let (a, b) = (values[i], values[i + 1]);
        if a == 0.0 {
            brackets.push((grid[i], grid[i]));
        } else if a * b < 0.0 {
            brackets.push((grid[i], grid[i + 1]));
        }
    }
    if values[grid_n] == 0.0 {
        brackets.push((grid[grid_n], grid[grid_n]));
    }

    let mut roots = Vec::new();
    for (lo0, hi0) in brackets {
        let root = bisect(&f, lo0, hi0, tol)?;
        let l = space.lambda(root)?;
        if l.v1.abs() < LAMBDA_PRIME_ZERO {
            continue;
        }
        let (value, scale) = f(root)?;
        roots.push(RootRecord {
            which,
            bracket: (lo0, hi0),
            root,
            criterion_residual: value.abs() / scale,
            lambda: l.v0,
            lambda_prime: l.v1,
            oracle_bitension_norm: bitension_norm(space, which, root)?,
        });
    }
    Ok(roots)
}

fn bisect(f: &dyn Fn(f64) -> Result<(f64, f64)>, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let (mut f_lo, _) = f(lo)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if hi - lo < BISECTION_WIDTH || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let (f_mid, scale) = f(mid)?;
        if f_mid.abs() / scale < tol {
            return Ok(mid);
        }
        if (f_lo < 0.0) == (f_mid < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ProperBiharmonic,
    MinimalOrGeodesic,
    NotBiharmonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiharmonicityReport {
    pub which: Submanifold,
    pub c: f64,
    pub criterion_value: f64,
    /// `|criterion| / scale`.
    pub criterion_scaled: f64,
    pub lambda_prime: f64,
    pub bitension_norm: f64,
    /// Geodesic curvature of the curve or mean curvature `|H|` of the leaf.
    pub curvature: f64,
    pub verdict: Verdict,
    /// Whether the criterion and the oracle agree on biharmonicity.
    pub consistent: bool,
}

/// Scaled criterion below this counts as a criterion root in [`leaf_report`].
pub const CRITERION_ROOT_TOL: f64 = 1e-6;

/// Classifies the curve (`b = 0`) or leaf at `c` using the bitension oracle with
/// tolerance `tol`, and records whether the closed-form criterion agrees.
pub fn leaf_report(space: &ModelSpace, which: Submanifold, c: f64, tol: f64) -> Result<BiharmonicityReport> {
    let l: Jet3 = space.lambda(c)?;
    let (value, scale) = criterion_with_scale(space, which, c)?;
    let norm = bitension_norm(space, which, c)?;
    let curvature = match which {
        Submanifold::Curve => curve_geometry(space, LegendreCurve { b: 0.0, c })?.geodesic_curvature,
        Submanifold::Surface => surface_geometry(space, AntiInvariantSurface { c })?.mean_curvature.abs(),
    };
    let degenerate = l.v1.abs() < LAMBDA_PRIME_ZERO;
    let verdict = if degenerate {
        Verdict::MinimalOrGeodesic
    } else if norm < tol {
        Verdict::ProperBiharmonic
    } else {
        Verdict::NotBiharmonic
    };
    let criterion_root = value.abs() / scale < CRITERION_ROOT_TOL;
    let consistent = degenerate || (verdict == Verdict::ProperBiharmonic) == criterion_root;
    Ok(BiharmonicityReport {
        which,
        c,
        criterion_value: value,
        criterion_scaled: value.abs() / scale,
        lambda_prime: l.v1,
        bitension_norm: norm,
        curvature,
        verdict,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::LambdaFamily;
    use crate::manifold::SignChoice;
    use approx::assert_abs_diff_eq;

    fn power(n: f64, sign: SignChoice) -> ModelSpace {
        ModelSpace::new(LambdaFamily::power(n).unwrap(), sign)
    }

    #[test]
    fn geodesic_curvature_of_power_family() {
        let sp = power(0.5, SignChoice::Plus);
        let g = curve_geometry(&sp, LegendreCurve { b: 0.3, c: 2.0 }).unwrap();
        assert_abs_diff_eq!(g.geodesic_curvature, 0.5 / (2.0 * 2.0), epsilon = 1e-14);
        assert_abs_diff_eq!(g.tangential_acceleration, 0.0);
        let flat = ModelSpace::new(LambdaFamily::constant(2.0).unwrap(), SignChoice::Plus);
        assert_eq!(curve_geometry(&flat, LegendreCurve { b: 0.0, c: 1.0 }).unwrap().geodesic_curvature, 0.0);
        assert_eq!(curve_bitension(&flat, LegendreCurve { b: 0.0, c: 1.0 }).unwrap().norm(), 0.0);
    }

    #[test]
    fn power_criterion_factorization() {
        for sign in [SignChoice::Plus, SignChoice::Minus] {
            let sp = power(0.3, sign);
            let s = sign.value();
            for c in [0.2_f64, 1.0, 3.7] {
                let n: f64 = 0.3;
                let pre = c.powf(-2.0 * n - 2.0);
                let curve = pre * (n * (1.0 - n) - 8.0 * c * c * (1.0 + s * c.powf(-n)));
                let surf = pre * (n * (1.0 - n) - 8.0 * c * c * (1.0 + s * c.powf(-n)).powi(2));
                assert_abs_diff_eq!(curve_criterion(&sp, c).unwrap(), curve, epsilon = 1e-12 * curve.abs().max(1.0));
                assert_abs_diff_eq!(surface_criterion(&sp, c).unwrap(), surf, epsilon = 1e-12 * surf.abs().max(1.0));
            }
        }
    }

    #[test]
    fn constant_family_criteria() {
        let unit = ModelSpace::new(LambdaFamily::constant(1.0).unwrap(), SignChoice::Minus);
        assert_eq!(curve_criterion(&unit, 0.4).unwrap(), 0.0);
        assert_eq!(surface_criterion(&unit, 0.4).unwrap(), 0.0);
        let v = 1.5;
        let sp = ModelSpace::new(LambdaFamily::constant(v).unwrap(), SignChoice::Plus);
        assert_abs_diff_eq!(surface_criterion(&sp, 0.0).unwrap(), -8.0 * v * v * (1.0 + v) * (1.0 + v));
        // geodesic roots are not proper
        let roots = find_roots(&unit, Submanifold::Curve, Interval { lo: -1.0, hi: 1.0 }, 10, 1e-12).unwrap();
        assert!(roots.is_empty());
    }

    #[test]
    fn curve_bitension_is_normal_and_vanishes_at_roots() {
        let sp = power(0.5, SignChoice::Plus);
        let roots = find_roots(&sp, Submanifold::Curve, Interval { lo: 0.01, hi: 2.0 }, 2000, 1e-14).unwrap();
        assert_eq!(roots.len(), 1);
        let r = roots[0];
        assert!(r.oracle_bitension_norm < 1e-7, "{r:?}");
        let off = curve_bitension(&sp, LegendreCurve { b: 0.0, c: r.root + 0.1 }).unwrap();
        assert!(off.norm() > 1e-3);
        assert!(off.u1.abs() < 1e-10 && off.u2.abs() < 1e-10);
    }

    #[test]
    fn surface_geometry_identities() {
        let sp = power(0.5, SignChoice::Minus);
        let c = 2.5;
        let g = surface_geometry(&sp, AntiInvariantSurface { c }).unwrap();
        let l = sp.lambda(c).unwrap();
        assert_abs_diff_eq!(g.mean_curvature_sq, l.v1 * l.v1 / (16.0 * l.v0 * l.v0), epsilon = 1e-15);
        assert_abs_diff_eq!(g.beta_surface, 1.0 - l.v0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.gamma_surface, 0.0);
        let kappa = 1.0 - l.v0 * l.v0;
        assert_abs_diff_eq!((g.beta_surface - 1.0).powi(2) + g.gamma_surface.powi(2), 1.0 - kappa, epsilon = 1e-15);
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(g.second_fundamental[i][j], g.second_fundamental[j][i], epsilon = 1e-15);
                assert_abs_diff_eq!(g.shape_operator[i][j], g.second_fundamental[i][j], epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn minimal_leaf_is_biharmonic() {
        let sp = ModelSpace::new(LambdaFamily::constant(0.7).unwrap(), SignChoice::Plus);
        let rep = leaf_report(&sp, Submanifold::Surface, 0.0, 1e-7).unwrap();
        assert_eq!(rep.verdict, Verdict::MinimalOrGeodesic);
        assert_eq!(rep.bitension_norm, 0.0);
        assert!(characterization_residual(&sp, 0.0).is_err());
    }

    #[test]
    fn invalid_grid_is_rejected() {
        let sp = power(0.5, SignChoice::Plus);
        assert!(find_roots(&sp, Submanifold::Surface, Interval { lo: 0.1, hi: 1.0 }, 1, 1e-12).is_err());
        assert!(find_roots(&sp, Submanifold::Surface, Interval { lo: 0.1, hi: 20.0 }, 10, 1e-12).is_err());
    }
}
