use itosym::model::{catalog, JumpLaw, Truncation};
use itosym::verify::{
    asymptotic_scaling, check_max_inequality, exponential_moment_check, flip_point, p_variation,
    ExpMomentConfig, InequalityKind, InequalityReport, MaxInequalityConfig, PVariationConfig,
    PVariationVerdict, ScalingConfig, ScalingDirection, ScalingVerdict,
};
use itosym::Error;
use statrs::distribution::{ContinuousCDF, Normal};

fn margins_consistent(r: &InequalityReport) {
    for c in &r.cells {
        assert_eq!(c.pass, c.margin >= 0.0, "{c:?}");
        assert!((c.margin - (c.rhs - (c.lhs - c.lhs_radius))).abs() <= 1e-12 * (1.0 + c.rhs.abs()));
    }
}

#[test]
fn brownian_exit_from_the_unit_ball() {
    let m = catalog::additive_bm(1, vec![0.0, 1.0]);
    let cfg = MaxInequalityConfig::new(vec![0.0], vec![0.04], vec![1.0], 20000, 1, 1e-3);
    let r = check_max_inequality(&m, &cfg).unwrap();
    margins_consistent(&r);
    let c = &r.cells[0];
    assert!((c.functional - 0.5).abs() < 1e-12);
    assert!((c.rhs - 16.0 * 0.04 * 0.5).abs() < 1e-12);
    // two-sided reflection bound 4 Φ̄(5)
    let oracle = 4.0 * Normal::new(0.0, 1.0).unwrap().sf(5.0);
    assert!(c.lhs <= oracle + 3.0 * (oracle / 20000.0).sqrt() + 1.0 / 20000.0);
    assert!(c.pass);
}

#[test]
fn drift_never_reaches_the_radius_in_time() {
    let m = catalog::pure_drift(vec![1.0]);
    let cfg = MaxInequalityConfig::new(vec![0.0], vec![0.1, 0.2, 0.4], vec![0.5], 500, 2, 1e-3);
    let r = check_max_inequality(&m, &cfg).unwrap();
    margins_consistent(&r);
    assert!(r.cells.iter().all(|c| c.lhs == 0.0 && c.pass));
}

#[test]
fn cauchy_constant_is_stable_under_doubling() {
    let m = catalog::alpha_stable(1, 1.0, 1.0);
    let grid = vec![0.01, 0.02, 0.04, 0.08];
    let cfg = MaxInequalityConfig::new(vec![0.0], grid, vec![1.0], 40000, 3, 1e-3);
    let r = check_max_inequality(&m, &cfg).unwrap();
    margins_consistent(&r);
    let (a, b) = (
        r.fitted_over(&[0.01, 0.02, 0.04]),
        r.fitted_over(&[0.02, 0.04, 0.08]),
    );
    assert!(a.max(b) / a.min(b) <= 1.3, "{a} vs {b}");
    assert!(r.fitted_constant.is_finite());
}

#[test]
fn lower_inequality_examples() {
    let m = catalog::additive_bm(1, vec![0.0, 1.0]);
    let mut long = MaxInequalityConfig::new(vec![0.0], vec![100.0], vec![0.1], 2000, 4, 0.01);
    long.side = InequalityKind::Lower;
    let r = check_max_inequality(&m, &long).unwrap();
    margins_consistent(&r);
    let c = &r.cells[0];
    assert_eq!(c.lhs, 0.0);
    assert!(c.rhs > 0.0 && c.rhs < 1.0 && c.pass, "{c:?}");

    let mut short = MaxInequalityConfig::new(vec![0.0], vec![0.01], vec![10.0], 2000, 5, 1e-3);
    short.side = InequalityKind::Lower;
    let r = check_max_inequality(&m, &short).unwrap();
    let c = &r.cells[0];
    assert_eq!(c.lhs, 1.0);
    // h(R) = π²/(8R²) for unit-rate Brownian motion
    let h = std::f64::consts::PI.powi(2) / (8.0 * 100.0);
    assert!((c.functional - h).abs() < 1e-9 * h, "{}", c.functional);
    assert!(c.rhs > 1.0 && c.pass);

    let constant = catalog::det_jump_unit(1);
    let mut cfg = MaxInequalityConfig::new(vec![0.0], vec![0.5], vec![1.0], 100, 6, 0.01);
    cfg.side = InequalityKind::Lower;
    assert!(matches!(
        check_max_inequality(&constant, &cfg),
        Err(Error::SectorViolated(_))
    ));
}

#[test]
fn scaling_of_a_drift() {
    let m = catalog::pure_drift(vec![1.0]);
    let cfg = ScalingConfig::new(vec![0.0], vec![2.0], ScalingDirection::ToZero, 100, 7);
    let r = asymptotic_scaling(&m, &cfg).unwrap();
    assert_eq!(r[0].verdict, ScalingVerdict::ToZero);
    for q in &r[0].quantiles {
        assert!(
            (q.q50 - q.t.sqrt()).abs() < 1e-9 * q.t.sqrt().max(1e-300),
            "{q:?}"
        );
    }
}

#[test]
fn scaled_quantiles_are_ordered() {
    let m = catalog::jump_diffusion(vec![0.5], 1.0, 2.0, JumpLaw::TwoPoint { size: 0.5 });
    for direction in [ScalingDirection::ToZero, ScalingDirection::ToInfinity] {
        let cfg = ScalingConfig::new(vec![0.0], vec![1.0, 2.5], direction, 300, 8);
        for r in asymptotic_scaling(&m, &cfg).unwrap() {
            assert!(!r.note.is_empty());
            for q in &r.quantiles {
                assert!(0.0 <= q.q10 && q.q10 <= q.q50 && q.q50 <= q.q90, "{q:?}");
            }
        }
    }
}

#[test]
fn moment_bounds() {
    let bm = catalog::additive_bm(1, vec![0.0, 1.0]);
    let r = exponential_moment_check(
        &bm,
        &ExpMomentConfig::new(vec![0.0], vec![1.0], 1.0, 50000, 9, 0.05),
    )
    .unwrap();
    assert!((r.exponent_bound - 0.5).abs() < 1e-12);
    assert!((r.mean - 0.5f64.exp()).abs() < 3.0 * r.std_error, "{r:?}");
    assert!(r.pass);

    let cp = catalog::compound_poisson(1, 1.0, JumpLaw::TwoPoint { size: 1.0 }, Truncation::zero());
    let r = exponential_moment_check(
        &cp,
        &ExpMomentConfig::new(vec![0.0], vec![0.0], 1.0, 100, 10, 0.1),
    )
    .unwrap();
    assert_eq!((r.mean, r.bound, r.exponent_bound), (1.0, 1.0, 0.0));
    assert!(r.pass);
}

fn verdict_at(reports: &[itosym::verify::PVariationReport], p: f64) -> PVariationVerdict {
    reports.iter().find(|r| r.p == p).unwrap().verdict
}

#[test]
fn p_variation_examples() {
    let drift = catalog::pure_drift(vec![1.0]);
    let r = p_variation(
        &drift,
        &PVariationConfig::new(vec![0.0], vec![1.0], 8, 2, 11),
    )
    .unwrap();
    assert!(r[0].sums.iter().all(|s| (s - 1.0).abs() < 1e-12));
    assert_eq!(r[0].verdict, PVariationVerdict::Bounded);

    let bm = catalog::additive_bm(1, vec![0.0, 1.0]);
    let r = p_variation(
        &bm,
        &PVariationConfig::new(vec![0.0], vec![1.0, 2.0], 12, 200, 12),
    )
    .unwrap();
    assert_eq!(verdict_at(&r, 2.0), PVariationVerdict::Bounded);
    assert_eq!(verdict_at(&r, 1.0), PVariationVerdict::Growing);
    let quadratic = r.iter().find(|r| r.p == 2.0).unwrap();
    assert!((quadratic.sums.last().unwrap() - 1.0).abs() < 0.05);

    let cauchy = catalog::alpha_stable(1, 1.0, 1.0);
    let r = p_variation(
        &cauchy,
        &PVariationConfig::new(vec![0.0], vec![0.5, 1.5], 12, 200, 13),
    )
    .unwrap();
    assert_eq!(verdict_at(&r, 1.5), PVariationVerdict::Bounded);
    assert_eq!(verdict_at(&r, 0.5), PVariationVerdict::Growing);
    assert_eq!(flip_point(&r), Some(1.5));
    for rep in &r {
        assert!(rep.sums.iter().all(|s| *s >= 0.0));
    }
}
