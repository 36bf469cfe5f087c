//! Exponential moments `E e^{ξ'(X_{τ+t} - x)} ≤ e^{b(ξ) t}` with
//! `b(ξ) = sup |ξ'ℓ + ½ ξ'Qξ + ∫ (e^{ξ'y} - 1 - ξ'y χ(y)) N(dy)|`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{model_hash, JumpKernel, LocalJumps, ProcessModel, ValidationBox};
use crate::simulate::{par_paths, Event, Flow, SimConfig, Stepper};
use crate::stats::{mean, variance};
use crate::symbol::levy::truncated_mean;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpMomentConfig {
    pub tau: f64,
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
    pub t: f64,
    pub paths: usize,
    pub seed: u64,
    pub step: f64,
    /// Region over which `b(ξ)` is maximized; defaults to `[τ, τ+t]` times
    /// the unit box around `x`.
    #[serde(default)]
    pub region: Option<ValidationBox>,
}

impl ExpMomentConfig {
    pub fn new(x: Vec<f64>, xi: Vec<f64>, t: f64, paths: usize, seed: u64, step: f64) -> Self {
        ExpMomentConfig {
            tau: 0.0,
            x,
            xi,
            t,
            paths,
            seed,
            step,
            region: None,
        }
    }

    fn region(&self) -> ValidationBox {
        self.region.clone().unwrap_or_else(|| {
            let mut b = ValidationBox::new(
                (self.tau, self.tau + self.t),
                self.x.iter().map(|v| (v - 1.0, v + 1.0)).collect(),
            );
            if self.x.len() > 2 {
                b.resolution = 3;
            }
            b
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpMomentReport {
    pub model_hash: String,
    pub seed: u64,
    pub paths: usize,
    pub step: f64,
    pub tau: f64,
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
    pub t: f64,
    pub exponent_bound: f64,
    pub bound: f64,
    pub mean: f64,
    pub std_error: f64,
    pub pass: bool,
}

fn violated(msg: String) -> Error {
    Error::HypothesisViolated(msg)
}

/// `b(ξ)` over the grid of `region`.
pub fn exponent_bound(model: &ProcessModel, xi: &[f64], region: &ValidationBox) -> Result<f64> {
    if xi.len() != model.state_dim() {
        return Err(Error::InvalidConfig(
            "ξ does not match the state dimension".into(),
        ));
    }
    if model.is_det_jump() {
        return Err(violated(
            "the scheduled jump is not described by a jump kernel, so b(ξ) does not control it"
                .into(),
        ));
    }
    let compensator = match &model.jumps {
        JumpKernel::CompoundPoisson { law, .. } => {
            truncated_mean(law, model.dimension, &model.truncation)
        }
        _ => Vec::new(),
    };
    let mut b: f64 = 0.0;
    for s in region.times() {
        for x in region.states() {
            let ch = model.eval_characteristics(s, &x)?;
            let mut v: f64 = xi.iter().zip(ch.drift.iter()).map(|(a, l)| a * l).sum();
            for i in 0..xi.len() {
                for j in 0..xi.len() {
                    v += 0.5 * xi[i] * ch.diffusion[(i, j)] * xi[j];
                }
            }
            let k = ch.kernel;
            let on_jumps = &xi[k.offset..k.offset + k.dim];
            match k.jumps {
                LocalJumps::None => {}
                LocalJumps::CompoundPoisson { intensity, law } => {
                    let mut prod = 1.0;
                    for &u in on_jumps {
                        prod *= law.mgf(u).ok_or_else(|| {
                            violated(format!(
                                "jump law has no exponential moment at ξ-component {u}"
                            ))
                        })?;
                    }
                    let shift: f64 = on_jumps.iter().zip(&compensator).map(|(a, m)| a * m).sum();
                    v += intensity * (prod - 1.0) - intensity * shift;
                }
                LocalJumps::Stable { scale, .. } => {
                    if scale > 0.0 && on_jumps.iter().any(|u| *u != 0.0) {
                        return Err(violated(
                            "α-stable jumps have no exponential moments".into(),
                        ));
                    }
                }
            }
            if !v.is_finite() {
                return Err(violated(format!(
                    "b(ξ) integrand is not finite at s={s}, x={x:?}"
                )));
            }
            b = b.max(v.abs());
        }
    }
    Ok(b)
}

pub fn exponential_moment_check(
    model: &ProcessModel,
    cfg: &ExpMomentConfig,
) -> Result<ExpMomentReport> {
    if cfg.x.len() != model.state_dim() || cfg.xi.len() != model.state_dim() {
        return Err(Error::InvalidConfig(
            "x and ξ must match the state dimension".into(),
        ));
    }
    if !(cfg.t > 0.0) || cfg.paths < 2 {
        return Err(Error::InvalidConfig(
            "need t > 0 and at least two paths".into(),
        ));
    }
    let b = exponent_bound(model, &cfg.xi, &cfg.region())?;
    let sim = SimConfig::new(cfg.step.min(cfg.t), cfg.t, cfg.seed);
    let stepper = Stepper::new(model, &sim)?;
    let stop = [cfg.tau + cfg.t];
    let values = par_paths(cfg.paths, cfg.seed, 0, |rng, _| {
        let mut v = 0.0;
        stepper.run(rng, cfg.tau, &cfg.x, cfg.t, &stop, |ev| {
            if let Event::Grid {
                x, stop: Some(_), ..
            } = ev
            {
                let e: f64 = x
                    .iter()
                    .zip(&cfg.x)
                    .zip(&cfg.xi)
                    .map(|((a, b), u)| u * (a - b))
                    .sum();
                v = e.exp();
            }
            Flow::Continue
        })?;
        Ok(v)
    })?;
    let m = mean(&values);
    let se = (variance(&values) / values.len() as f64).sqrt();
    let bound = (b * cfg.t).exp();
    Ok(ExpMomentReport {
        model_hash: model_hash(model),
        seed: cfg.seed,
        paths: cfg.paths,
        step: cfg.step,
        tau: cfg.tau,
        x: cfg.x.clone(),
        xi: cfg.xi.clone(),
        t: cfg.t,
        exponent_bound: b,
        bound,
        mean: m,
        std_error: se,
        pass: m - 3.0 * se <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{catalog, JumpLaw, Truncation};

    #[test]
    fn zero_frequency_is_equality() {
        let m = catalog::additive_bm(1, vec![0.0, 1.0]);
        let r = exponential_moment_check(
            &m,
            &ExpMomentConfig::new(vec![0.0], vec![0.0], 1.0, 50, 1, 0.1),
        )
        .unwrap();
        assert_eq!((r.mean, r.bound, r.std_error), (1.0, 1.0, 0.0));
        assert!(r.pass);
    }

    #[test]
    fn brownian_bound() {
        let m = catalog::additive_bm(1, vec![0.0, 1.0]);
        let cfg = ExpMomentConfig::new(vec![0.0], vec![1.0], 1.0, 4000, 2, 0.05);
        let r = exponential_moment_check(&m, &cfg).unwrap();
        assert!((r.exponent_bound - 0.5).abs() < 1e-12);
        assert!((r.mean - 0.5f64.exp()).abs() < 4.0 * r.std_error);
        assert!(r.pass);
    }

    #[test]
    fn two_point_exponent() {
        let m =
            catalog::compound_poisson(1, 1.0, JumpLaw::TwoPoint { size: 1.0 }, Truncation::zero());
        let b = exponent_bound(
            &m,
            &[1.0],
            &ExpMomentConfig::new(vec![0.0], vec![1.0], 1.0, 2, 0, 1.0).region(),
        )
        .unwrap();
        assert!((b - (1f64.cosh() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn heavy_tails_are_refused() {
        let m = catalog::alpha_stable(1, 1.0, 1.0);
        let cfg = ExpMomentConfig::new(vec![0.0], vec![1.0], 1.0, 10, 0, 0.1);
        assert!(matches!(
            exponential_moment_check(&m, &cfg),
            Err(Error::HypothesisViolated(_))
        ));
        let e = catalog::compound_poisson(
            1,
            1.0,
            JumpLaw::TwoSidedExponential { rate: 1.0 },
            Truncation::zero(),
        );
        assert!(matches!(
            exponential_moment_check(&e, &cfg),
            Err(Error::HypothesisViolated(_))
        ));
    }
}
