use itosym::model::{catalog, JumpLaw, Truncation, TruncationShape};
use itosym::symbol::Symbol;
use proptest::prelude::*;

fn models() -> Vec<itosym::model::ProcessModel> {
    let mut v: Vec<_> = catalog::entries().into_iter().map(|e| e.model).collect();
    v.push(catalog::alpha_stable(2, 0.7, 1.3));
    v.push(catalog::compound_poisson(
        2,
        1.5,
        JumpLaw::Gaussian {
            mean: 0.4,
            std: 0.3,
        },
        Truncation {
            inner_radius: 0.5,
            outer_radius: 1.0,
            shape: TruncationShape::SmoothBump,
        },
    ));
    v.push(catalog::jump_diffusion(
        vec![1.0],
        0.2,
        3.0,
        JumpLaw::TwoSidedExponential { rate: 2.0 },
    ));
    v
}

#[test]
fn symbols_vanish_at_zero_frequency() {
    for m in models() {
        let sym = Symbol::new(&m).unwrap();
        let x = vec![0.3; m.state_dim()];
        let p = sym.eval(0.7, &x, &vec![0.0; m.state_dim()]).unwrap();
        assert_eq!(p.norm(), 0.0, "{:?}", m.catalog);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermitian_with_nonnegative_real_part(
        pick in 0usize..9,
        s in 0.0f64..3.0,
        raw in prop::collection::vec(-8.0f64..8.0, 2),
    ) {
        let ms = models();
        let m = &ms[pick % ms.len()];
        let n = m.state_dim();
        let xi = &raw[..n];
        let neg: Vec<f64> = xi.iter().map(|v| -v).collect();
        let x = vec![0.0; n];
        let sym = Symbol::new(m).unwrap();
        let p = sym.eval(s, &x, xi).unwrap();
        let q = sym.eval(s, &x, &neg).unwrap();
        let scale = 1.0 + p.norm();
        prop_assert!((p - q.conj()).norm() <= 1e-12 * scale);
        prop_assert!(p.re >= -1e-12 * scale);
    }
}
