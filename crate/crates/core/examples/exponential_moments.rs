//! `E e^{ξ(X_t - x)}` against the bound `e^{b(ξ) t}` for a compound Poisson
//! process with `±1` jumps and for Brownian motion.

use itosym::model::{catalog, JumpLaw, Truncation};
use itosym::verify::{exponential_moment_check, ExpMomentConfig};

fn main() -> itosym::Result<()> {
    let models = [
        (
            "compound poisson",
            catalog::compound_poisson(1, 1.0, JumpLaw::TwoPoint { size: 1.0 }, Truncation::zero()),
        ),
        ("brownian", catalog::additive_bm(1, vec![0.0, 1.0])),
    ];
    for (name, m) in &models {
        for xi in [0.0, 0.5, 1.0] {
            let r = exponential_moment_check(
                m,
                &ExpMomentConfig::new(vec![0.0], vec![xi], 1.0, 50_000, 10, 0.01),
            )?;
            println!(
                "{name} ξ={xi}: mean {:.5} ± {:.5}, bound e^{{{:.4} t}} = {:.5}, pass {}",
                r.mean, r.std_error, r.exponent_bound, r.bound, r.pass
            );
        }
    }
    Ok(())
}
