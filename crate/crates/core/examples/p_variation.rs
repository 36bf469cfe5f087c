//! Dyadic p-variation sums for Brownian motion and the Cauchy process and
//! the exponent where they stop growing.

use itosym::model::catalog;
use itosym::verify::{flip_point, p_variation, PVariationConfig};

fn main() -> itosym::Result<()> {
    for (name, m) in [
        ("brownian", catalog::additive_bm(1, vec![0.0, 1.0])),
        ("cauchy", catalog::alpha_stable(1, 1.0, 1.0)),
    ] {
        let ps: Vec<f64> = (1..=12).map(|k| 0.25 * k as f64).collect();
        let reports = p_variation(&m, &PVariationConfig::new(vec![0.0], ps, 12, 100, 9))?;
        println!("{name}: flip at {:?}", flip_point(&reports));
        for r in &reports {
            let tail = &r.sums[r.sums.len() - 3..];
            println!(
                "  p={:<5} last levels {:>10.4} {:>10.4} {:>10.4}  {:?}",
                r.p, tail[0], tail[1], tail[2], r.verdict
            );
        }
    }
    Ok(())
}
