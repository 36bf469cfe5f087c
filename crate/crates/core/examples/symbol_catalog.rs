//! Prints the built-in catalog and each model's closed-form symbol at a few
//! frequencies, at times either side of the scheduled jump.

use itosym::model::catalog;
use itosym::symbol::symbol_analytic;

fn main() -> itosym::Result<()> {
    for e in catalog::entries() {
        println!("{:<18} p = {}", e.name, e.symbol);
        println!("{:<18} {}", "", e.indices);
        println!("{:<18} {}", "", e.note);
        for tau in [0.0, 2.0] {
            for xi in [0.5, 1.0, 4.0] {
                let p = symbol_analytic(&e.model, tau, &[0.0], &[xi])?;
                println!(
                    "{:<18} τ={tau:<4} ξ={xi:<4} p = {:+.6} {:+.6}i",
                    "", p.re, p.im
                );
            }
        }
        println!();
    }
    Ok(())
}
