//! Upper and lower maximal inequalities for Brownian motion and the Cauchy
//! process, with the fitted constants.

use itosym::model::catalog;
use itosym::verify::{check_max_inequality_lower, check_max_inequality_upper, MaxInequalityConfig};

fn main() -> itosym::Result<()> {
    let ts = vec![1e-3, 2e-3, 4e-3, 8e-3];
    for (name, m) in [
        ("brownian", catalog::additive_bm(1, vec![0.0, 1.0])),
        ("cauchy", catalog::alpha_stable(1, 1.0, 1.0)),
    ] {
        let cfg = MaxInequalityConfig::new(vec![0.0], ts.clone(), vec![0.1, 0.2], 20_000, 5, 1e-4);
        let up = check_max_inequality_upper(&m, &cfg)?;
        println!(
            "{name} upper, c_d = {}: fitted ĉ = {:.4}",
            up.cells[0].constant, up.fitted_constant
        );
        for c in &up.cells {
            println!(
                "  t={:.0e} R={}: P(S≥R) = {:.4} ± {:.4}, RHS {:.4}, pass {}",
                c.t, c.radius, c.lhs, c.lhs_radius, c.rhs, c.pass
            );
        }
    }
    let m = catalog::additive_bm(1, vec![0.0, 1.0]);
    let cfg = MaxInequalityConfig::new(vec![0.0], ts, vec![0.02, 0.05], 20_000, 6, 2.5e-5);
    let low = check_max_inequality_lower(&m, &cfg)?;
    println!(
        "brownian lower, c_k = 16: fitted ĉ = {:.4}",
        low.fitted_constant
    );
    for c in &low.cells {
        println!(
            "  t={:.0e} R={}: P(S<R) = {:.4} ± {:.4}, RHS {:.4}, pass {}",
            c.t, c.radius, c.lhs, c.lhs_radius, c.rhs, c.pass
        );
    }
    Ok(())
}
