//! Generalized Blumenthal-Getoor indices from the `H` and `h` functionals
//! for stable-like models and Brownian motion.

use itosym::indices::{index_report, IndexConfig};
use itosym::model::catalog;

fn show(v: Option<f64>) -> String {
    v.map_or("undefined".into(), |v| format!("{v:.3}"))
}

fn main() -> itosym::Result<()> {
    let models = [
        ("stable α=0.5", catalog::alpha_stable(1, 0.5, 1.0)),
        ("stable α=1.5", catalog::alpha_stable(1, 1.5, 1.0)),
        ("brownian", catalog::additive_bm(1, vec![0.0, 1.0])),
        ("pure drift", catalog::pure_drift(vec![2.0])),
    ];
    for (name, m) in &models {
        let r = index_report(m, &IndexConfig::default_for(m))?;
        let s = &r.at_start;
        println!(
            "{name}: at start β={:.3} β̲={:.3} δ̄={} δ={}",
            s.beta,
            s.beta_under,
            show(s.delta_bar),
            show(s.delta)
        );
        for l in &r.at_infinity {
            let i = &l.indices;
            println!(
                "{:>w$}  at infinity (τ={}, x={:?}) β={:.3} β̲={:.3} δ̄={} δ={}",
                "",
                l.tau,
                l.x,
                i.beta,
                i.beta_under,
                show(i.delta_bar),
                show(i.delta),
                w = name.len()
            );
        }
        for c in &r.grid_checks {
            println!(
                "{:>w$}  grid refinement of {} at R={:.1}: {:.2e}",
                "",
                c.curve,
                c.radius,
                c.relative_change,
                w = name.len()
            );
        }
    }
    Ok(())
}
