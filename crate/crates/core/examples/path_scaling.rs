//! Quantiles of `t^{-1/λ} sup_{s≤t} |X_s|` along geometric lag grids for
//! Brownian motion, toward `t → 0` and `t → ∞`.

use itosym::model::catalog;
use itosym::verify::{asymptotic_scaling, ScalingConfig, ScalingDirection};

fn main() -> itosym::Result<()> {
    let m = catalog::additive_bm(1, vec![0.0, 1.0]);
    for direction in [ScalingDirection::ToZero, ScalingDirection::ToInfinity] {
        let cfg = ScalingConfig::new(vec![0.0], vec![1.0, 2.0, 3.0], direction, 1000, 8);
        for r in asymptotic_scaling(&m, &cfg)? {
            println!("{direction:?} λ={}: {:?}", r.lambda, r.verdict);
            for q in &r.quantiles {
                println!(
                    "  t={:<12.4e} q10={:<10.4} q50={:<10.4} q90={:.4}",
                    q.t, q.q10, q.q50, q.q90
                );
            }
        }
    }
    Ok(())
}
