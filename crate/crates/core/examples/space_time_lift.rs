//! The space-time lift adds the clock as a state coordinate. Its symbol at
//! `((τ, x), (ξ₀, ξ))` is `-iξ₀ + p(τ, x, ξ)`, and the lifted path carries
//! the clock along.

use itosym::model::catalog;
use itosym::simulate::{simulate_path, SimConfig};
use itosym::symbol::Symbol;
use num_complex::Complex64;

fn main() -> itosym::Result<()> {
    let m = catalog::additive_bm(1, vec![0.0, 1.0, 0.5]);
    let lifted = m.lift_space_time();
    let (base, lift) = (Symbol::new(&m)?, Symbol::new(&lifted)?);
    for (tau, xi0, xi) in [(0.0, 1.0, 2.0), (1.0, -0.5, 2.0), (3.0, 2.0, 0.5)] {
        let l = lift.eval(0.0, &[tau, 0.0], &[xi0, xi])?;
        let p = Complex64::new(0.0, -xi0) + base.eval(tau, &[0.0], &[xi])?;
        println!("τ={tau} ξ₀={xi0} ξ={xi}: lifted {l:.6}, -iξ₀ + p {p:.6}");
    }

    let path = simulate_path(&lifted, 0.0, &[2.0, 0.0], &SimConfig::new(0.25, 1.0, 7))?;
    for (t, s) in path.times.iter().zip(&path.states) {
        println!("t={t:.2} clock={:.2} x={:+.4}", s[0], s[1]);
    }
    Ok(())
}
