//! Dyadic p-variation sums `Σ_j ‖X_{t_j} - X_{t_{j-1}}‖^p` over the
//! partitions of `[τ, τ+T]` into `2^k` pieces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{model_hash, ProcessModel};
use crate::simulate::{max_dist, par_paths, Event, Flow, PathSample, SimConfig, Stepper};
use crate::stats::median;

pub const MAX_DEPTH: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PVariationVerdict {
    Bounded,
    Growing,
    Inconclusive,
}

fn default_horizon() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PVariationConfig {
    pub tau: f64,
    pub x: Vec<f64>,
    pub exponents: Vec<f64>,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    /// Finest level `K`; the path is simulated with step `T / 2^K`.
    pub depth: usize,
    pub paths: usize,
    pub seed: u64,
}

impl PVariationConfig {
    pub fn new(x: Vec<f64>, exponents: Vec<f64>, depth: usize, paths: usize, seed: u64) -> Self {
        PVariationConfig {
            tau: 0.0,
            x,
            exponents,
            horizon: default_horizon(),
            depth,
            paths,
            seed,
        }
    }

    fn validate(&self, model: &ProcessModel) -> Result<()> {
        if self.exponents.is_empty() || self.exponents.iter().any(|p| !(*p > 0.0)) {
            return Err(Error::InvalidConfig("exponents must be positive".into()));
        }
        if self.depth < 3 || self.depth > MAX_DEPTH {
            return Err(Error::InvalidConfig(format!(
                "depth must lie in 3..={MAX_DEPTH}"
            )));
        }
        if !(self.horizon > 0.0) || self.paths == 0 || self.x.len() != model.state_dim() {
            return Err(Error::InvalidConfig(
                "bad horizon, path count or start state".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PVariationReport {
    pub model_hash: String,
    pub seed: u64,
    pub paths: usize,
    pub p: f64,
    /// Levels `1..=K`.
    pub levels: Vec<usize>,
    /// Median over paths of the level sum.
    pub sums: Vec<f64>,
    pub running_max: Vec<f64>,
    pub sup: f64,
    pub verdict: PVariationVerdict,
}

/// `Σ ‖Δ‖^p` at levels `1..=depth` of a path observed at `2^depth + 1`
/// equally spaced times; increments use the max norm.
pub fn level_sums(states: &[Vec<f64>], p: f64, depth: usize) -> Vec<f64> {
    let n = 1usize << depth;
    debug_assert_eq!(states.len(), n + 1);
    (1..=depth)
        .map(|k| {
            let stride = n >> k;
            (0..1usize << k)
                .map(|j| max_dist(&states[(j + 1) * stride], &states[j * stride]).powf(p))
                .sum()
        })
        .collect()
}

/// The same sums for a recorded path, reading the càdlàg state at each
/// dyadic time of `[tau, tau + horizon]`.
pub fn path_level_sums(path: &PathSample, p: f64, horizon: f64, depth: usize) -> Vec<f64> {
    let n = 1usize << depth;
    let mut states = Vec::with_capacity(n + 1);
    let mut i = 0;
    for j in 0..=n {
        let t = path.tau + horizon * j as f64 / n as f64;
        while i + 1 < path.times.len() && path.times[i + 1] <= t + 1e-12 * t.abs().max(1.0) {
            i += 1;
        }
        states.push(path.states[i].clone());
    }
    level_sums(&states, p, depth)
}

/// `bounded` when the last two levels exceed level `K-2` by under 10%,
/// `growing` when level `K` is at least twice level `K-2`.
pub fn verdict(sums: &[f64]) -> PVariationVerdict {
    let k = sums.len();
    if k < 3 {
        return PVariationVerdict::Inconclusive;
    }
    let base = sums[k - 3];
    if sums[k - 2].max(sums[k - 1]) <= 1.1 * base {
        PVariationVerdict::Bounded
    } else if sums[k - 1] >= 2.0 * base {
        PVariationVerdict::Growing
    } else {
        PVariationVerdict::Inconclusive
    }
}

/// One report per exponent, all from the same paths.
pub fn p_variation(model: &ProcessModel, cfg: &PVariationConfig) -> Result<Vec<PVariationReport>> {
    cfg.validate(model)?;
    let n = 1usize << cfg.depth;
    let sim = SimConfig::new(cfg.horizon / n as f64, cfg.horizon, cfg.seed);
    let stepper = Stepper::new(model, &sim)?;
    let stops: Vec<f64> = (1..=n)
        .map(|j| cfg.tau + cfg.horizon * j as f64 / n as f64)
        .collect();
    let per_path = par_paths(cfg.paths, cfg.seed, 0, |rng, _| {
        let mut states = vec![cfg.x.clone()];
        stepper.run(rng, cfg.tau, &cfg.x, cfg.horizon, &stops, |ev| {
            if let Event::Grid {
                x, stop: Some(_), ..
            } = ev
            {
                states.push(x.to_vec());
            }
            Flow::Continue
        })?;
        Ok(cfg
            .exponents
            .iter()
            .map(|&p| level_sums(&states, p, cfg.depth))
            .collect::<Vec<_>>())
    })?;
    let hash = model_hash(model);
    Ok(cfg
        .exponents
        .iter()
        .enumerate()
        .map(|(e, &p)| {
            let sums: Vec<f64> = (0..cfg.depth)
                .map(|k| median(&per_path.iter().map(|s| s[e][k]).collect::<Vec<_>>()))
                .collect();
            let running_max: Vec<f64> = sums
                .iter()
                .scan(0.0f64, |m, &v| {
                    *m = m.max(v);
                    Some(*m)
                })
                .collect();
            PVariationReport {
                model_hash: hash.clone(),
                seed: cfg.seed,
                paths: cfg.paths,
                p,
                levels: (1..=cfg.depth).collect(),
                sup: running_max[running_max.len() - 1],
                verdict: verdict(&sums),
                sums,
                running_max,
            }
        })
        .collect())
}

/// Smallest scanned exponent that is bounded together with every larger
/// one, provided some smaller exponent is growing.
pub fn flip_point(reports: &[PVariationReport]) -> Option<f64> {
    let mut r: Vec<&PVariationReport> = reports.iter().collect();
    r.sort_by(|a, b| a.p.total_cmp(&b.p));
    let mut first = r.len();
    while first > 0 && r[first - 1].verdict == PVariationVerdict::Bounded {
        first -= 1;
    }
    (first < r.len()
        && r[..first]
            .iter()
            .any(|x| x.verdict == PVariationVerdict::Growing))
    .then(|| r[first].p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::catalog;
    use crate::simulate::simulate_path;

    #[test]
    fn drift_total_variation() {
        let m = catalog::pure_drift(vec![1.0]);
        let r = p_variation(&m, &PVariationConfig::new(vec![0.0], vec![1.0], 8, 3, 1)).unwrap();
        assert!(r[0].sums.iter().all(|s| (s - 1.0).abs() < 1e-12));
        assert_eq!(r[0].verdict, PVariationVerdict::Bounded);
    }

    #[test]
    fn brownian_quadratic_variation() {
        let m = catalog::additive_bm(1, vec![0.0, 1.0]);
        let r = p_variation(
            &m,
            &PVariationConfig::new(vec![0.0], vec![0.5, 2.0], 12, 40, 2),
        )
        .unwrap();
        assert_eq!(r[0].verdict, PVariationVerdict::Growing);
        assert_eq!(r[1].verdict, PVariationVerdict::Bounded);
        assert!((r[1].sums[11] - 1.0).abs() < 0.1);
        assert!(r.iter().all(|x| x.sums.iter().all(|s| *s >= 0.0)));
    }

    #[test]
    fn recorded_path_matches() {
        let m = catalog::pure_drift(vec![2.0]);
        let path = simulate_path(&m, 0.0, &[0.0], &SimConfig::new(1.0 / 16.0, 1.0, 0)).unwrap();
        let s = path_level_sums(&path, 2.0, 1.0, 4);
        assert!((s[3] - 4.0 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn flip_requires_growth_below() {
        let mk = |p: f64, v: PVariationVerdict| PVariationReport {
            model_hash: String::new(),
            seed: 0,
            paths: 1,
            p,
            levels: vec![],
            sums: vec![],
            running_max: vec![],
            sup: 0.0,
            verdict: v,
        };
        use PVariationVerdict::*;
        let r = vec![
            mk(1.0, Growing),
            mk(1.5, Inconclusive),
            mk(2.0, Bounded),
            mk(2.5, Bounded),
        ];
        assert_eq!(flip_point(&r), Some(2.0));
        assert_eq!(flip_point(&r[1..]), None);
    }
}
