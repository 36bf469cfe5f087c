//! Monte Carlo checks of the maximal inequalities, the small- and
//! large-time scaling of the running supremum, exponential moments and
//! p-variation.

pub mod maximal;
pub mod moments;
pub mod pvariation;
pub mod scaling;

pub use maximal::{
    check_max_inequality, check_max_inequality_lower, check_max_inequality_upper, InequalityCell,
    InequalityKind, InequalityReport, MaxInequalityConfig,
};
pub use moments::{exponent_bound, exponential_moment_check, ExpMomentConfig, ExpMomentReport};
pub use pvariation::{
    flip_point, level_sums, p_variation, path_level_sums, PVariationConfig, PVariationReport,
    PVariationVerdict,
};
pub use scaling::{
    asymptotic_scaling, trend_verdict, ScaledQuantiles, ScalingConfig, ScalingDirection,
    ScalingReport, ScalingVerdict,
};

use crate::error::Result;
use crate::model::ProcessModel;
use crate::simulate::{envelope_dist, max_dist, par_paths, Event, Flow, SimConfig, Stepper};

/// Running suprema of `‖X_s - x‖_∞` at each of the lags `ts` (ascending),
/// one row per path. Paths use streams `(block, path)`.
#[allow(clippy::too_many_arguments)]
pub fn running_sups(
    model: &ProcessModel,
    tau: f64,
    x: &[f64],
    ts: &[f64],
    step: f64,
    bridge: bool,
    paths: usize,
    seed: u64,
    block: u64,
) -> Result<Vec<Vec<f64>>> {
    let horizon = ts.iter().copied().fold(0.0, f64::max);
    let mut cfg = SimConfig::new(step.min(horizon), horizon, seed);
    cfg.bridge = bridge;
    let stepper = Stepper::new(model, &cfg)?;
    let stops: Vec<f64> = ts.iter().map(|t| tau + t).collect();
    par_paths(paths, seed, block, |rng, _| {
        let mut sup: f64 = 0.0;
        let mut out = vec![0.0; ts.len()];
        stepper.run(rng, tau, x, horizon, &stops, |ev| {
            match ev {
                Event::Grid { x: y, stop, .. } => {
                    sup = sup.max(max_dist(y, x));
                    if let Some(i) = stop {
                        out[i] = sup;
                    }
                }
                Event::Jump { before, after, .. } => {
                    sup = sup.max(max_dist(before, x)).max(max_dist(after, x));
                }
                Event::Envelope { lo, hi, .. } => sup = sup.max(envelope_dist(x, lo, hi)),
            }
            Flow::Continue
        })?;
        Ok(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::catalog;

    #[test]
    fn pure_drift_sups() {
        let m = catalog::pure_drift(vec![1.0]);
        let rows = running_sups(&m, 0.0, &[0.0], &[0.25, 0.7], 0.01, true, 3, 1, 0).unwrap();
        for r in rows {
            assert!((r[0] - 0.25).abs() < 1e-12 && (r[1] - 0.7).abs() < 1e-12);
        }
    }

    #[test]
    fn stops_off_the_grid() {
        let m = catalog::pure_drift(vec![1.0]);
        let rows = running_sups(&m, 0.0, &[0.0], &[0.013, 0.5], 0.1, false, 1, 1, 0).unwrap();
        assert!((rows[0][0] - 0.013).abs() < 1e-12);
    }
}
