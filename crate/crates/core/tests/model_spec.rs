use itosym::model::{
    catalog, parse_model_spec, to_json, to_toml, validate_model, CoefficientField, JumpLaw,
    ModelFormat, Truncation, TruncationShape, ValidationBox,
};
use itosym::Error;
use proptest::prelude::*;

fn parse_err_path(text: &str) -> String {
    match parse_model_spec(text, ModelFormat::Toml) {
        Err(Error::Parse { path, .. }) => path,
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn missing_drift_is_named() {
    let text = "dimension = 1\n[diffusion]\nkind = \"constant\"\nvalues = [1.0]\n";
    assert_eq!(parse_err_path(text), "drift");
}

#[test]
fn bad_keys_are_named() {
    let base = "dimension = 1\n[drift]\nkind = \"constant\"\nvalues = [0.0]\n[diffusion]\nkind = \"constant\"\nvalues = [0.0]\n";
    let stable = format!("{base}[jumps]\nfamily = \"symmetric-alpha-stable\"\nalpha = 2.5\nscale = {{ kind = \"constant\", values = [1.0] }}\n");
    assert_eq!(parse_err_path(&stable), "jumps.alpha");
    let zero_trunc = format!(
        "{base}[jumps]\nfamily = \"symmetric-alpha-stable\"\nalpha = 1.0\nscale = {{ kind = \"constant\", values = [1.0] }}\n\
         [truncation]\ninner_radius = 1.0\nouter_radius = 1.0\nshape = \"zero\"\n"
    );
    assert_eq!(parse_err_path(&zero_trunc), "truncation.shape");
    let wrong_len = base.replace(
        "values = [0.0]\n[diffusion]",
        "values = [0.0, 1.0]\n[diffusion]",
    );
    assert_eq!(parse_err_path(&wrong_len), "drift");
    let unknown = format!("{base}colour = 3\n");
    assert!(matches!(
        parse_model_spec(&unknown, ModelFormat::Toml),
        Err(Error::Parse { .. })
    ));
}

#[test]
fn catalog_round_trips_in_both_formats() {
    for e in catalog::entries() {
        let t = to_toml(&e.model);
        let back = parse_model_spec(&t, ModelFormat::Toml).unwrap();
        assert_eq!(back, e.model, "{}", e.name);
        assert_eq!(to_toml(&back), t);
        let j = to_json(&e.model);
        assert_eq!(ModelFormat::detect(&j), ModelFormat::Json);
        assert_eq!(
            parse_model_spec(&j, ModelFormat::Json).unwrap(),
            e.model,
            "{}",
            e.name
        );
    }
}

#[test]
fn catalog_tag_disagreement_is_refused() {
    let text = "dimension = 1\n[catalog]\nname = \"det-jump-unit\"\n[drift]\nkind = \"constant\"\nvalues = [1.0]\n";
    assert_eq!(parse_err_path(text), "catalog");
}

#[test]
fn indefinite_diffusion_is_reported() {
    let mut m = catalog::additive_bm(2, vec![0.0, 1.0]);
    m.diffusion = CoefficientField::constant(vec![1.0, 2.0, 2.0, 1.0]);
    let report = validate_model(&m, &ValidationBox::new((0.0, 1.0), vec![(-1.0, 1.0); 2])).unwrap();
    assert!(!report.is_valid());
    assert!(report
        .psd_violations
        .iter()
        .all(|v| (v.min_eigenvalue + 1.0).abs() < 1e-9));
    let ok = catalog::jump_diffusion(vec![0.0], 0.5, 2.0, JumpLaw::TwoPoint { size: 0.3 });
    assert!(
        validate_model(&ok, &ValidationBox::new((0.0, 1.0), vec![(-1.0, 1.0)]))
            .unwrap()
            .is_valid()
    );
}

proptest! {
    #[test]
    fn truncation_is_radial_and_bounded(
        inner in 0.1f64..2.0,
        extra in 0.0f64..2.0,
        smooth in any::<bool>(),
        y in prop::collection::vec(-6.0f64..6.0, 1..4),
    ) {
        let t = Truncation {
            inner_radius: inner,
            outer_radius: inner + extra,
            shape: if smooth { TruncationShape::SmoothBump } else { TruncationShape::PiecewiseLinear },
        };
        let neg: Vec<f64> = y.iter().map(|v| -v).collect();
        let v = t.eval(&y);
        prop_assert_eq!(v, t.eval(&neg));
        prop_assert!((0.0..=1.0).contains(&v));
        let rho = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rho <= inner {
            prop_assert_eq!(v, 1.0);
        }
        if rho >= t.support_radius() {
            prop_assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn random_diffusions_round_trip(a in -2.0f64..2.0, b in -2.0f64..2.0, c in 0.0f64..3.0) {
        let mut m = catalog::additive_bm(2, vec![0.0, 1.0]);
        m.catalog = None;
        m.diffusion = CoefficientField::constant(vec![a * a + c, a * b, a * b, b * b + c]);
        let back = parse_model_spec(&to_toml(&m), ModelFormat::Toml).unwrap();
        prop_assert_eq!(&back, &m);
        let report = validate_model(&m, &ValidationBox::new((0.0, 0.0), vec![(0.0, 0.0); 2])).unwrap();
        prop_assert!(report.is_valid());
    }
}
