use itosym::estimate::{estimate_symbol, EstimatorConfig, Extrapolation};
use itosym::model::{catalog, JumpLaw, Truncation};
use itosym::symbol::Symbol;
use itosym::Error;

#[test]
fn confidence_radius_shrinks_like_inverse_root_n() {
    let m = catalog::additive_bm(1, vec![0.0, 1.0]);
    let radius = |n: usize| {
        estimate_symbol(&m, 0.0, &[0.0], &[1.0], &EstimatorConfig::new(n, 4))
            .unwrap()
            .value
            .confidence_radius
            .unwrap()
    };
    let ratio = radius(1000) / radius(16000);
    assert!((3.2..=4.8).contains(&ratio), "ratio {ratio}");
}

#[test]
fn zero_frequency_gives_exact_zero() {
    for e in catalog::entries() {
        let x = vec![0.0; e.model.state_dim()];
        let xi = vec![0.0; e.model.state_dim()];
        let est = estimate_symbol(&e.model, 0.25, &x, &xi, &EstimatorConfig::new(100, 2)).unwrap();
        assert_eq!((est.value.re, est.value.im), (0.0, 0.0), "{}", e.name);
    }
}

#[test]
fn compound_poisson_estimate_covers_the_symbol() {
    let m = catalog::compound_poisson(
        1,
        2.0,
        JumpLaw::Gaussian {
            mean: 0.3,
            std: 0.5,
        },
        Truncation::default(),
    );
    let exact = Symbol::new(&m).unwrap().eval(0.0, &[0.0], &[1.5]).unwrap();
    let mut cfg = EstimatorConfig::new(20000, 6);
    cfg.radius = 10.0;
    let est = estimate_symbol(&m, 0.0, &[0.0], &[1.5], &cfg).unwrap();
    let err = (est.value.complex() - exact).norm();
    assert!(
        err <= est.value.confidence_radius.unwrap() + est.bias_budget,
        "error {err}"
    );
}

#[test]
fn extrapolation_modes_agree_on_drift() {
    let m = catalog::pure_drift(vec![0.5]);
    let mut cfg = EstimatorConfig::new(100, 1);
    cfg.radius = 10.0;
    for mode in [Extrapolation::SmallestLag, Extrapolation::Richardson2Point] {
        cfg.extrapolation = mode;
        let est = estimate_symbol(&m, 0.0, &[0.0], &[2.0], &cfg).unwrap();
        assert!(
            (est.value.re).abs() < 1e-3 && (est.value.im + 1.0).abs() < 1e-3,
            "{mode:?}: {:?}",
            est.value
        );
    }
}

#[test]
fn bad_configurations_are_refused() {
    let m = catalog::additive_bm(1, vec![0.0, 1.0]);
    let mut cfg = EstimatorConfig::new(99, 1);
    assert!(matches!(
        estimate_symbol(&m, 0.0, &[0.0], &[1.0], &cfg),
        Err(Error::InvalidConfig(_))
    ));
    cfg.paths = 100;
    cfg.lags = vec![0.01, 0.02];
    assert!(matches!(
        estimate_symbol(&m, 0.0, &[0.0], &[1.0], &cfg),
        Err(Error::InvalidConfig(_))
    ));
    cfg.lags = vec![0.02, 0.01];
    assert!(matches!(
        estimate_symbol(&m, 0.0, &[0.0, 1.0], &[1.0], &cfg),
        Err(Error::InvalidConfig(_))
    ));
}
