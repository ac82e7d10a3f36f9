//! Pointwise structure and curvature checks, aggregated to worst cases.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::manifold::{verify_structure, FrameField, FrameVector, ModelSpace, Point};
use crate::tensor::{
    extract_kappa_mu, integrability_check, riemann_table, xi_derivative_of_kappa, AuditStatus, Geometry,
};

/// Fraction of the `z`-domain random points are drawn from.
pub const INTERIOR_FRACTION: f64 = 0.8;

/// `n` points uniform in `[−1, 1]² ×` the interior of the family's domain.
pub fn random_points(space: &ModelSpace, n: usize, seed: u64) -> Vec<Point> {
    let zone = space.family.domain.interior(INTERIOR_FRACTION);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let x = rng.random_range(-1.0..=1.0);
            let y = rng.random_range(-1.0..=1.0);
            let z = rng.random_range(zone.lo..zone.hi);
            Point::new(x, y, z)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub contact: f64,
    pub connection: f64,
    pub table: f64,
    pub h_operator: f64,
    pub curvature: f64,
    pub kappa_mu_relative: f64,
    pub kappa_mu_residual: f64,
    pub xi_kappa: f64,
    pub brackets: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            contact: 1e-9,
            connection: 1e-9,
            table: 1e-12,
            h_operator: 1e-10,
            curvature: 1e-9,
            kappa_mu_relative: 1e-8,
            kappa_mu_residual: 1e-9,
            xi_kappa: 1e-10,
            brackets: 1e-9,
        }
    }
}

impl Tolerances {
    /// Every tolerance set to `tol`.
    pub fn uniform(tol: f64) -> Self {
        Self {
            contact: tol,
            connection: tol,
            table: tol,
            h_operator: tol,
            curvature: tol,
            kappa_mu_relative: tol,
            kappa_mu_residual: tol,
            xi_kappa: tol,
            brackets: tol,
        }
    }
}

/// Worst residual of one named check over all points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub status: AuditStatus,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub records: Vec<CheckRecord>,
    /// Smallest Sasakian defect seen; positive means the structure is nowhere Sasakian.
    pub min_sasakian_defect: f64,
}

impl CheckReport {
    pub fn pass_count(&self) -> usize {
        self.records.iter().filter(|r| r.status == AuditStatus::Pass).count()
    }

    pub fn flag_count(&self) -> usize {
        self.records.len() - self.pass_count()
    }

    pub fn get(&self, name: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    pub fn worst(&self, prefix: &str) -> f64 {
        self.records.iter().filter(|r| r.name.starts_with(prefix)).map(|r| r.residual).fold(0.0, f64::max)
    }
}

struct Collector {
    records: Vec<CheckRecord>,
}

impl Collector {
    fn note(&mut self, name: &str, residual: f64, tolerance: f64, p: Point) {
        let rec = CheckRecord {
            name: name.to_string(),
            residual,
            tolerance,
            status: if residual < tolerance { AuditStatus::Pass } else { AuditStatus::Flagged },
            x: p.x,
            y: p.y,
            z: p.z,
        };
        match self.records.iter_mut().find(|r| r.name == name) {
            Some(cur) if cur.residual >= residual && !residual.is_nan() => {}
            Some(cur) => *cur = rec,
            None => self.records.push(rec),
        }
    }
}

/// `∇_{e_i} e_j` predicted in terms of `λ`, with `L = λ ± 1` and `a = λ′/2λ`.
pub fn closed_form_connection(lambda: f64, lambda_prime: f64, s: f64) -> [[FrameVector; 3]; 3] {
    let l = lambda + s;
    let a = lambda_prime / (2.0 * lambda);
    let v = FrameVector::new;
    [
        [v(0.0, 0.0, 0.0), v(0.0, 0.0, -l), v(0.0, l, 0.0)],
        [v(0.0, 0.0, -l), v(0.0, 0.0, a), v(l, -a, 0.0)],
        [v(0.0, s - lambda, 0.0), v(lambda - s, 0.0, 0.0), v(0.0, 0.0, 0.0)],
    ]
}

/// Runs every pointwise check at each point and keeps the worst case per check.
///
/// Checks: the four contact metric axioms; the connection against its closed
/// form, metricity and torsion; `h` eigenvalues `±λ`, symmetry, trace, `hφ = −φh`
/// and `hξ = 0`; curvature pair symmetries and the first Bianchi identity; `(κ, μ)`
/// against `κ = 1 − λ²`, `μ = 2(1 ± λ)` with the fit residual and `ξ(κ)`; and the
/// `ξ`-bracket relations of the `h`-eigenframe.
pub fn run_checks(space: &ModelSpace, points: &[Point], tol: &Tolerances) -> Result<CheckReport> {
    let s = space.sign.value();
    let mut c = Collector { records: Vec::new() };
    let mut min_sasakian = f64::INFINITY;
    let basis = [0, 1, 2].map(FrameField::basis);

    for &p in points {
        let (x, y) = (p.x, p.y);
        let (res, _) = verify_structure(space, p, tol.contact)?;
        c.note("contact_eta_xi", res.eta_xi, tol.contact, p);
        c.note("contact_phi_square", res.phi_square, tol.contact, p);
        c.note("contact_compatibility", res.compatibility, tol.contact, p);
        c.note("contact_condition", res.contact_condition, tol.contact, p);
        min_sasakian = min_sasakian.min(res.sasakian_defect);

        let geo = Geometry::at(space, p)?;
        let l = geo.lambda();
        let table = geo.connection_table(x, y);
        let predicted = closed_form_connection(l.v0, l.v1, s);
        let mut conn = 0.0_f64;
        for (i, row) in predicted.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                conn = conn.max((table.derivative(i, j) - *v).max_abs());
            }
        }
        c.note("connection_closed_form", conn, tol.connection, p);
        c.note("connection_metricity", table.metricity_defect(), tol.table, p);
        c.note("connection_torsion", table.torsion_defect(&geo.structure_constants(x, y)), tol.table, p);

        let h: Vec<FrameVector> = basis.iter().map(|e| geo.h(e).value(x, y)).collect();
        let eigen = (h[1] - s * l.v0 * FrameVector::basis(1))
            .max_abs()
            .max((h[2] + s * l.v0 * FrameVector::basis(2)).max_abs());
        c.note("h_eigenvalues", eigen, tol.h_operator, p);
        let mut sym = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                sym = sym.max((h[i].to_array()[j] - h[j].to_array()[i]).abs());
            }
        }
        c.note("h_symmetric", sym, tol.h_operator, p);
        c.note("h_trace", (h[0].u1 + h[1].u2 + h[2].u3).abs(), tol.h_operator, p);
        let mut anti = 0.0_f64;
        for e in &basis {
            let d = &geo.h(&geo.phi(e)) + &geo.phi(&geo.h(e));
            anti = anti.max(d.value(x, y).max_abs());
        }
        c.note("h_anticommutes_phi", anti, tol.h_operator, p);
        c.note("h_annihilates_xi", h[0].max_abs(), tol.h_operator, p);

        let r = riemann_table(&geo, x, y);
        let rc = |i: usize, j: usize, k: usize, m: usize| r[i][j][k].to_array()[m];
        let (mut anti_xy, mut anti_zw, mut pair, mut bianchi) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for m in 0..3 {
                        anti_xy = anti_xy.max((rc(i, j, k, m) + rc(j, i, k, m)).abs());
                        anti_zw = anti_zw.max((rc(i, j, k, m) + rc(i, j, m, k)).abs());
                        pair = pair.max((rc(i, j, k, m) - rc(k, m, i, j)).abs());
                    }
                    let cyc = r[i][j][k] + r[j][k][i] + r[k][i][j];
                    bianchi = bianchi.max(cyc.max_abs());
                }
            }
        }
        c.note("curvature_antisymmetry_xy", anti_xy, tol.curvature, p);
        c.note("curvature_antisymmetry_zw", anti_zw, tol.curvature, p);
        c.note("curvature_pair_symmetry", pair, tol.curvature, p);
        c.note("curvature_first_bianchi", bianchi, tol.curvature, p);

        let km = extract_kappa_mu(space, p)?;
        let kappa = 1.0 - l.v0 * l.v0;
        let mu = 2.0 * (1.0 + s * l.v0);
        c.note("kappa_relative", (km.kappa - kappa).abs() / kappa.abs().max(1.0), tol.kappa_mu_relative, p);
        let mu_err = km.mu.map_or(f64::INFINITY, |m| (m - mu).abs() / mu.abs().max(1.0));
        c.note("mu_relative", mu_err, tol.kappa_mu_relative, p);
        c.note("kappa_mu_fit_residual", km.residual, tol.kappa_mu_residual, p);
        c.note("xi_kappa", xi_derivative_of_kappa(space, p)?.abs(), tol.xi_kappa, p);

        let ib = integrability_check(space, p)?;
        c.note("xi_bracket_eigenvector", ib.first_residual, tol.brackets, p);
        c.note("xi_bracket_phi_eigenvector", ib.second_residual, tol.brackets, p);
    }
    Ok(CheckReport { records: c.records, min_sasakian_defect: min_sasakian })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::LambdaFamily;
    use crate::manifold::SignChoice;

    #[test]
    fn random_points_are_seeded_and_interior() {
        let sp = ModelSpace::new(LambdaFamily::power(0.5).unwrap(), SignChoice::Plus);
        let a = random_points(&sp, 50, 7);
        assert_eq!(a, random_points(&sp, 50, 7));
        assert_ne!(a, random_points(&sp, 50, 8));
        assert!(a.iter().all(|p| p.z > 1.2 && p.z < 10.8 && p.x.abs() <= 1.0 && p.y.abs() <= 1.0));
    }

    #[test]
    fn checks_pass_on_power_family() {
        for sign in [SignChoice::Plus, SignChoice::Minus] {
            let sp = ModelSpace::new(LambdaFamily::power(0.5).unwrap(), sign);
            let rep = run_checks(&sp, &random_points(&sp, 10, 1), &Tolerances::default()).unwrap();
            assert_eq!(rep.flag_count(), 0, "{:#?}", rep.records);
            assert!(rep.min_sasakian_defect > 0.0);
        }
    }
}
