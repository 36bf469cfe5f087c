//! Compares the jump part of the symbol computed by adaptive quadrature of
//! the Lévy integral with its closed form.

use itosym::model::{catalog, JumpLaw, Truncation};
use itosym::symbol::Symbol;

fn main() -> itosym::Result<()> {
    let models = [
        ("stable α=0.5", catalog::alpha_stable(1, 0.5, 1.0)),
        ("stable α=1.5", catalog::alpha_stable(1, 1.5, 1.0)),
        ("stable α=1.2 in R²", catalog::alpha_stable(2, 1.2, 0.8)),
        (
            "gaussian jumps",
            catalog::compound_poisson(
                1,
                2.0,
                JumpLaw::Gaussian {
                    mean: 0.3,
                    std: 0.5,
                },
                Truncation::default(),
            ),
        ),
        (
            "laplace jumps",
            catalog::compound_poisson(
                1,
                1.0,
                JumpLaw::TwoSidedExponential { rate: 2.0 },
                Truncation::default(),
            ),
        ),
    ];
    println!(
        "{:<20} {:>6} {:>24} {:>10}",
        "model", "|ξ|", "closed form", "rel err"
    );
    for (name, m) in &models {
        let sym = Symbol::new(m)?;
        let x = vec![0.0; m.state_dim()];
        for r in [0.1, 1.0, 10.0, 50.0] {
            let xi = vec![r / (m.state_dim() as f64).sqrt(); m.state_dim()];
            let a = sym.eval(0.0, &x, &xi)?;
            let q = sym.eval_quadrature(0.0, &x, &xi)?;
            println!(
                "{name:<20} {r:>6} {:>11.6}{:+11.6}i {:>10.2e}",
                a.re,
                a.im,
                (a - q).norm() / a.norm()
            );
        }
    }
    Ok(())
}
