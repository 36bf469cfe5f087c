//! Monte Carlo estimate of the symbol from stopped paths, compared with the
//! closed form `½ξ²(1+τ)` of Brownian motion with variance `t + t²/2`.

use itosym::estimate::{estimate_symbols, radius_independence_check, EstimatorConfig};
use itosym::model::catalog;

fn main() -> itosym::Result<()> {
    let m = catalog::additive_bm(1, vec![0.0, 1.0, 0.5]);
    let cfg = EstimatorConfig::new(20_000, 3);
    let xis = vec![vec![1.0], vec![2.0]];
    for tau in [0.0, 1.0] {
        for e in estimate_symbols(&m, tau, &[0.0], &xis, &cfg)? {
            let xi = e.frequency[0];
            println!(
                "τ={tau} ξ={xi}: p̂ = {:.4} {:+.4}i ± {:.4} (exact {:.4}), bias budget {:.4}",
                e.value.re,
                e.value.im,
                e.value.confidence_radius.unwrap_or(0.0),
                0.5 * xi * xi * (1.0 + tau),
                e.bias_budget
            );
            for l in &e.lags {
                println!(
                    "    h={:.0e}: {:.4} {:+.4}i ± {:.4}",
                    l.lag, l.re, l.im, l.radius
                );
            }
        }
    }
    let r = radius_independence_check(&m, 0.5, &[0.0], &[1.5], &cfg, (1.0, 2.0))?;
    println!(
        "R=1 vs R=2: difference {:.4}, combined radius {:.4}, agree {}",
        r.difference, r.combined_radius, r.agree
    );
    Ok(())
}
