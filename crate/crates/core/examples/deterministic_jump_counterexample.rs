//! A process that sits still and jumps by one at time 1. Its symbol is zero
//! at every `τ < 1` even though the law of the path is not that of the
//! constant process.

use itosym::estimate::{estimate_symbol, EstimatorConfig};
use itosym::model::catalog;
use itosym::simulate::{simulate_path, SimConfig};

fn main() -> itosym::Result<()> {
    let m = catalog::det_jump_unit(1);
    for tau in [0.0, 0.5, 0.99] {
        for xi in [1.0, 3.0] {
            let e = estimate_symbol(&m, tau, &[0.0], &[xi], &EstimatorConfig::new(500, 1))?;
            println!("τ={tau} ξ={xi}: p̂ = {} {:+}i", e.value.re, e.value.im);
        }
    }
    let path = simulate_path(&m, 0.0, &[0.0], &SimConfig::new(0.25, 2.0, 1))?;
    for (t, s) in path.times.iter().zip(&path.states) {
        println!("t={t:.2} x={}", s[0]);
    }
    for j in &path.jumps {
        println!("jump at t={} from {:?} by {:?}", j.time, j.before, j.size);
    }
    Ok(())
}
