//! Path simulation, stopped paths and running suprema.

pub mod dump;
pub mod stable;
mod stepper;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use stepper::{Event, Flow, Stepper};

use crate::error::{Error, Result};
use crate::model::ProcessModel;
use crate::rng::{path_rng, stream_id, PathRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecordMode {
    #[default]
    FullPath,
    EndpointAndSup,
}

fn default_cutoff() -> f64 {
    0.01
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub step: f64,
    pub horizon: f64,
    pub seed: u64,
    #[serde(default)]
    pub stream: u64,
    /// Stable jumps below this norm are replaced by Gaussian noise when the
    /// scale depends on the state.
    #[serde(default = "default_cutoff")]
    pub small_jump_cutoff: f64,
    #[serde(default)]
    pub record: RecordMode,
    /// Monitor the running supremum between grid points with Brownian
    /// bridge extremes.
    #[serde(default)]
    pub bridge: bool,
    /// Thinning bound for state-dependent jump rates; estimated from the
    /// start point when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intensity_bound: Option<f64>,
    /// Radii whose first exit times are recorded.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exit_radii: Vec<f64>,
}

impl SimConfig {
    pub fn new(step: f64, horizon: f64, seed: u64) -> Self {
        SimConfig {
            step,
            horizon,
            seed,
            stream: 0,
            small_jump_cutoff: default_cutoff(),
            record: RecordMode::FullPath,
            bridge: false,
            intensity_bound: None,
            exit_radii: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if !(self.step > 0.0 && self.step.is_finite()) {
            return bad("step must be positive");
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return bad("horizon must be positive");
        }
        if self.step > self.horizon * (1.0 + 1e-12) {
            return bad("step must not exceed the horizon");
        }
        if !(self.small_jump_cutoff > 0.0 && self.small_jump_cutoff < 1.0) {
            return bad("small_jump_cutoff must lie in (0,1)");
        }
        if self
            .intensity_bound
            .is_some_and(|b| !(b >= 0.0 && b.is_finite()))
        {
            return bad("intensity_bound must be finite and nonnegative");
        }
        if self.exit_radii.iter().any(|r| !(*r > 0.0)) {
            return bad("exit radii must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpMark {
    pub time: f64,
    pub before: Vec<f64>,
    pub size: Vec<f64>,
}

impl JumpMark {
    pub fn after(&self) -> Vec<f64> {
        self.before
            .iter()
            .zip(&self.size)
            .map(|(a, b)| a + b)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExitRecord {
    pub radius: f64,
    /// First observed time with `‖X - x‖_∞ > radius`.
    pub time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub tau: f64,
    pub start: Vec<f64>,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub jumps: Vec<JumpMark>,
    pub exits: Vec<ExitRecord>,
    /// Supremum of `‖X_s - x‖_∞` over the horizon.
    pub sup: f64,
}

/// Max-norm distance.
pub fn max_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (u, v)| m.max((u - v).abs()))
}

/// Max-norm distance from `x` to the farthest corner of the box `[lo, hi]`.
pub fn envelope_dist(x: &[f64], lo: &[f64], hi: &[f64]) -> f64 {
    x.iter()
        .zip(lo.iter().zip(hi))
        .fold(0.0, |m, (c, (l, h))| m.max(h - c).max(c - l))
}

fn check_start(model: &ProcessModel, x: &[f64]) -> Result<()> {
    if x.len() != model.state_dim() {
        return Err(Error::InvalidConfig(format!(
            "start state has dimension {}, model state dimension is {}",
            x.len(),
            model.state_dim()
        )));
    }
    Ok(())
}

/// One trajectory on `[tau, tau + cfg.horizon]`.
pub fn simulate_path(
    model: &ProcessModel,
    tau: f64,
    x: &[f64],
    cfg: &SimConfig,
) -> Result<PathSample> {
    check_start(model, x)?;
    let stepper = Stepper::new(model, cfg)?;
    let mut rng = path_rng(cfg.seed, cfg.stream);
    let full = cfg.record == RecordMode::FullPath;
    let mut path = PathSample {
        tau,
        start: x.to_vec(),
        times: Vec::new(),
        states: Vec::new(),
        jumps: Vec::new(),
        exits: cfg
            .exit_radii
            .iter()
            .map(|&radius| ExitRecord { radius, time: None })
            .collect(),
        sup: 0.0,
    };
    let mut last = x.to_vec();
    let mut last_t = tau;
    let note = |t: f64, y: &[f64], exits: &mut Vec<ExitRecord>| {
        let dist = max_dist(y, x);
        for e in exits.iter_mut() {
            if e.time.is_none() && dist > e.radius {
                e.time = Some(t);
            }
        }
        dist
    };
    stepper.run(&mut rng, tau, x, cfg.horizon, &[], |ev| {
        match ev {
            Event::Grid { t, x: y, .. } => {
                path.sup = path.sup.max(note(t, y, &mut path.exits));
                if full || t == tau {
                    path.times.push(t);
                    path.states.push(y.to_vec());
                }
                last_t = t;
                last.copy_from_slice(y);
            }
            Event::Jump {
                t,
                before,
                size,
                after,
            } => {
                path.sup = path.sup.max(note(t, before, &mut path.exits));
                path.sup = path.sup.max(note(t, after, &mut path.exits));
                path.jumps.push(JumpMark {
                    time: t,
                    before: before.to_vec(),
                    size: size.to_vec(),
                });
            }
            Event::Envelope { lo, hi, .. } => {
                path.sup = path.sup.max(envelope_dist(x, lo, hi));
            }
        }
        Flow::Continue
    })?;
    if !full && last_t != tau {
        path.times.push(last_t);
        path.states.push(last);
    }
    Ok(path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoppedEndpoint {
    /// `X` at `min(τ + h, σ_R)`.
    pub state: Vec<f64>,
    pub exited: bool,
    pub exit_time: Option<f64>,
}

/// Runs `stepper` until `tau + lag` or the first observed exit from the
/// max-norm ball of radius `radius`, freezing the state there.
pub fn run_stopped(
    stepper: &Stepper<'_>,
    rng: &mut PathRng,
    tau: f64,
    x: &[f64],
    radius: f64,
    lag: f64,
) -> Result<StoppedEndpoint> {
    let mut out = StoppedEndpoint {
        state: x.to_vec(),
        exited: false,
        exit_time: None,
    };
    stepper.run(rng, tau, x, lag, &[], |ev| {
        let (t, y) = match ev {
            Event::Grid { t, x: y, .. } => (t, y),
            Event::Jump {
                t, before, after, ..
            } => {
                if max_dist(before, x) > radius {
                    out.state.copy_from_slice(before);
                    out.exited = true;
                    out.exit_time = Some(t);
                    return Flow::Halt;
                }
                (t, after)
            }
            Event::Envelope { .. } => return Flow::Continue,
        };
        out.state.copy_from_slice(y);
        if max_dist(y, x) > radius {
            out.exited = true;
            out.exit_time = Some(t);
            Flow::Halt
        } else {
            Flow::Continue
        }
    })?;
    Ok(out)
}

/// Stopped endpoint `X^σ_{τ+h}` with exit detection on a grid of step at
/// most `h/64`.
pub fn simulate_stopped(
    model: &ProcessModel,
    tau: f64,
    x: &[f64],
    radius: f64,
    lag: f64,
    cfg: &SimConfig,
) -> Result<StoppedEndpoint> {
    if !(radius > 0.0) || !(lag > 0.0 && lag.is_finite()) {
        return Err(Error::InvalidConfig(
            "radius and lag must be positive".into(),
        ));
    }
    check_start(model, x)?;
    let cfg = stopped_config(cfg, lag);
    let stepper = Stepper::new(model, &cfg)?;
    let mut rng = path_rng(cfg.seed, cfg.stream);
    run_stopped(&stepper, &mut rng, tau, x, radius, lag)
}

/// `cfg` with horizon `lag` and step at most `lag / 64`.
pub fn stopped_config(cfg: &SimConfig, lag: f64) -> SimConfig {
    SimConfig {
        step: cfg.step.min(lag / 64.0),
        horizon: lag,
        bridge: false,
        ..cfg.clone()
    }
}

/// Supremum of `‖X_s - x‖_∞` over recorded states with `s ≤ τ + t`,
/// jump states included. Paths recorded in endpoint mode only know the
/// supremum over the full horizon.
pub fn running_sup(path: &PathSample, t: f64) -> f64 {
    let limit = path.tau + t;
    let tol = 1e-12 * limit.abs().max(1.0);
    let last = path.times.last().copied().unwrap_or(path.tau);
    if limit + tol >= last && path.states.len() <= 2 {
        return path.sup;
    }
    let mut sup: f64 = 0.0;
    for (s, y) in path.times.iter().zip(&path.states) {
        if *s <= limit + tol {
            sup = sup.max(max_dist(y, &path.start));
        }
    }
    for j in &path.jumps {
        if j.time <= limit + tol {
            sup = sup.max(max_dist(&j.before, &path.start));
            sup = sup.max(max_dist(&j.after(), &path.start));
        }
    }
    sup
}

/// Runs `f` for paths `0..n`, each with its own stream inside `block`,
/// and returns the results in path order.
pub fn par_paths<T: Send>(
    n: usize,
    seed: u64,
    block: u64,
    f: impl Fn(&mut PathRng, usize) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(seed, stream_id(block, i as u64));
            f(&mut rng, i)
        })
        .collect()
}
