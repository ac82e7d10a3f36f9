use kappamu::biharmonic::{surface_bitension, AntiInvariantSurface};
use kappamu::foliation::{
    foliation_rhs, integrate_foliation, interior_leaves, verify_first_integral, Branch, FoliationParams, Termination,
};
use kappamu::{LambdaFamily, ModelSpace, SignChoice};
use proptest::prelude::*;

fn params(beta: f64, sign: SignChoice, branch: Branch) -> FoliationParams {
    FoliationParams { beta_const: beta, sign, lambda0: 1.0, z0: 0.0, step: 1e-3, span: 1.0, branch }
}

const GOOD: [(f64, SignChoice); 3] = [(0.0, SignChoice::Minus), (-20.0, SignChoice::Minus), (45.0, SignChoice::Plus)];

#[test]
fn rhs_at_unit_lambda() {
    for beta in [-3.0, 0.0, 7.5] {
        let minus = foliation_rhs(1.0, &params(beta, SignChoice::Minus, Branch::Decreasing)).unwrap();
        let plus = foliation_rhs(1.0, &params(beta, SignChoice::Plus, Branch::Decreasing)).unwrap();
        assert!((minus - (beta + 24.0)).abs() < 1e-12);
        assert!((plus - (beta - 40.0)).abs() < 1e-12);
    }
}

#[test]
fn rhs_is_negative_near_zero_and_undefined_below() {
    for (beta, sign) in GOOD {
        let p = params(beta, sign, Branch::Decreasing);
        assert!(foliation_rhs(1e-3, &p).unwrap() < 0.0);
        assert!(foliation_rhs(0.0, &p).is_err());
        assert!(foliation_rhs(-1.0, &p).is_err());
    }
}

#[test]
fn nonpositive_start_gives_an_empty_trajectory() {
    let sol = integrate_foliation(&params(0.0, SignChoice::Plus, Branch::Decreasing)).unwrap();
    assert!(sol.is_empty());
    assert_eq!(sol.termination, Termination::RhsNonpositive);
}

#[test]
fn invalid_parameters_are_all_reported() {
    let mut p = params(0.0, SignChoice::Minus, Branch::Decreasing);
    p.step = 0.0;
    p.lambda0 = -1.0;
    let msg = integrate_foliation(&p).unwrap_err().to_string();
    assert!(msg.contains("step") && msg.contains("lambda0"), "{msg}");
}

#[test]
fn increasing_branches_blow_up() {
    let sol = integrate_foliation(&params(0.0, SignChoice::Minus, Branch::Increasing)).unwrap();
    assert_eq!(sol.termination, Termination::Diverged);
    assert!(sol.samples.iter().all(|s| s.lambda.is_finite() && s.lambda > 0.0));
}

#[test]
fn decreasing_trajectories_conserve_the_first_integral() {
    for (beta, sign) in GOOD {
        let p = params(beta, sign, Branch::Decreasing);
        let sol = integrate_foliation(&p).unwrap();
        assert!(sol.samples.len() > 50);
        assert!(sol.drift_per_unit_z() < 1e-8, "β={beta}: {}", sol.drift_per_unit_z());
        assert!(sol.samples.iter().all(|s| s.lambda > 0.0));
        assert!(sol.samples.windows(2).all(|w| w[1].lambda < w[0].lambda && (w[1].z - w[0].z - 1e-3).abs() < 1e-12));

        let half = integrate_foliation(&p.with_step(5e-4)).unwrap();
        // Compare over the common stretch of z so both runs see the same trajectory.
        let end = sol.extent().min(half.extent());
        let drift_to = |s: &kappamu::foliation::OdeSolution| {
            s.rows().iter().filter(|r| r.z - p.z0 <= end + 1e-12).map(|r| (r.f_surf / 2.0).abs()).fold(0.0, f64::max)
        };
        let ratio = drift_to(&sol) / drift_to(&half);
        assert!(ratio > 10.0, "β={beta}: halving ratio {ratio}");
    }
}

#[test]
fn trajectory_rows_satisfy_the_leaf_criterion() {
    for (beta, sign) in GOOD {
        let sol = integrate_foliation(&params(beta, sign, Branch::Decreasing)).unwrap();
        for (row, s) in sol.rows().iter().zip(&sol.samples) {
            assert!(row.f_surf.abs() < 1e-7, "z={}: {}", row.z, row.f_surf);
            assert_eq!((row.z, row.lambda, row.lambda_prime), (s.z, s.lambda, s.lambda_prime));
            assert!((row.rhs - s.lambda_prime * s.lambda_prime).abs() < 1e-8);
        }
    }
}

#[test]
fn tabulated_leaves_are_biharmonic() {
    for (beta, sign) in GOOD {
        let p = params(beta, sign, Branch::Decreasing);
        let sol = integrate_foliation(&p).unwrap();
        let sp = sol.model_space().unwrap();
        let (worst, _) = verify_first_integral(&sp, &interior_leaves(&sol, 200)).unwrap();
        assert!(worst < 1e-6, "β={beta}: {worst}");

        let half = integrate_foliation(&p.with_step(5e-4)).unwrap();
        let (worst_half, _) = verify_first_integral(&half.model_space().unwrap(), &interior_leaves(&sol, 200)).unwrap();
        assert!(worst / worst_half > 10.0, "β={beta}: {worst} → {worst_half}");

        for c in interior_leaves(&sol, 5) {
            let norm = surface_bitension(&sp, AntiInvariantSurface { c }).unwrap().norm();
            assert!(norm < 1e-6, "β={beta}, c={c}: {norm}");
        }
    }
}

#[test]
fn a_constant_fake_solution_is_flagged() {
    for sign in [SignChoice::Plus, SignChoice::Minus] {
        let v = 0.5;
        let sp = ModelSpace::new(LambdaFamily::constant(v).unwrap(), sign);
        let (worst, _) = verify_first_integral(&sp, &[0.0, 0.5, 1.0]).unwrap();
        let want = 8.0 * v * v * (1.0 + sign.value() * v).powi(2);
        assert!((worst - want).abs() < 1e-12 && worst > 1e-6);
    }
}

#[test]
fn no_leaves_is_an_error() {
    let sp = ModelSpace::new(LambdaFamily::power(0.5).unwrap(), SignChoice::Plus);
    assert!(verify_first_integral(&sp, &[]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trajectories_stay_positive_and_on_the_first_integral(
        beta in -40.0..40.0_f64, plus in any::<bool>(), lambda0 in 0.6..1.2_f64,
    ) {
        let sign = if plus { SignChoice::Plus } else { SignChoice::Minus };
        let p = FoliationParams { lambda0, span: 0.5, ..params(beta, sign, Branch::Decreasing) };
        let sol = integrate_foliation(&p).unwrap();
        prop_assert!(sol.samples.iter().all(|s| s.lambda > 0.0 && s.lambda.is_finite()));
        if sol.is_empty() {
            prop_assert_eq!(sol.termination, Termination::RhsNonpositive);
        } else {
            // Absolute drift grows with the slope; measure it against (λ′)².
            let slope = sol.samples.iter().map(|s| s.lambda_prime * s.lambda_prime).fold(1.0, f64::max);
            prop_assert!(sol.drift() < 1e-8 * slope, "drift {} at slope² {}", sol.drift(), slope);
            let half = integrate_foliation(&p.with_step(5e-4)).unwrap();
            if sol.termination == Termination::SpanExhausted
                && half.termination == Termination::SpanExhausted
                && sol.drift() > 1e-11
            {
                prop_assert!(sol.drift() / half.drift() > 10.0, "{} → {}", sol.drift(), half.drift());
            }
        }
    }
}
