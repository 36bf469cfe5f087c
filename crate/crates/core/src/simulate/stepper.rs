//! Jump-adapted Euler scheme driven by a visitor.
//!
//! The regular grid `τ + kΔ` is merged with caller-supplied stop times and
//! the horizon. Inside a grid step the path is advanced segment by segment
//! up to each candidate jump time, with the coefficients frozen at the
//! start of the segment.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use super::stable::{isotropic_stable, unit_direction};
use super::SimConfig;
use crate::error::{Error, Result};
use crate::model::kernel::{stable_small_jump_variance, stable_tail_mass};
use crate::model::{DiffusionBlock, JumpKernel, LocalJumps, ProcessModel};
use crate::symbol::levy::truncated_mean;

/// Something the visitor can observe while a path is generated.
#[derive(Debug, Clone, Copy)]
pub enum Event<'a> {
    /// State at a grid time. `stop` is the index into the stop list when
    /// `t` is one of the requested stop times.
    Grid {
        t: f64,
        x: &'a [f64],
        stop: Option<usize>,
    },
    Jump {
        t: f64,
        before: &'a [f64],
        size: &'a [f64],
        after: &'a [f64],
    },
    /// Per-coordinate range of the continuous part over the segment ending
    /// at `t_end`, from Brownian-bridge extremes.
    Envelope {
        t_end: f64,
        lo: &'a [f64],
        hi: &'a [f64],
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Halt,
}

/// Factor `σ` with `σσ' = Q` on the base coordinates, plus `diag Q`.
#[derive(Debug, Clone)]
struct Root {
    factor: RootFactor,
    diag: Vec<f64>,
}

#[derive(Debug, Clone)]
enum RootFactor {
    Zero,
    Isotropic(f64),
    Full(DMatrix<f64>),
}

const PSD_TOL: f64 = 1e-10;
const BOUND_SLACK: f64 = 1.25;

#[derive(Debug, Clone, Copy)]
enum JumpMode {
    None,
    /// Unit jump in every base coordinate when the clock reaches 1.
    Scheduled,
    Poisson,
    StableExact {
        alpha: f64,
    },
    StableCutoff {
        alpha: f64,
        eps: f64,
        tail: f64,
        small_var: f64,
    },
}

/// Prepared scheme for one model and configuration.
#[derive(Debug, Clone)]
pub struct Stepper<'m> {
    model: &'m ProcessModel,
    step: f64,
    bridge: bool,
    intensity_bound: Option<f64>,
    drift: Option<Vec<f64>>,
    root: Option<Root>,
    scale: Option<f64>,
    /// `E[J χ(J)]` of the compound-Poisson law, removed from the drift at
    /// rate `λ`.
    compensator: Option<Vec<f64>>,
    mode: JumpMode,
}

struct Scratch {
    drift: Vec<f64>,
    noise: Vec<f64>,
    old: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    size: Vec<f64>,
    before: Vec<f64>,
}

impl<'m> Stepper<'m> {
    pub fn new(model: &'m ProcessModel, cfg: &SimConfig) -> Result<Self> {
        cfg.validate()?;
        let n = model.state_dim();
        let d = model.dimension;
        let origin = vec![0.0; n];
        let constant =
            |f: &crate::model::CoefficientField| !f.depends_on_state() && !f.depends_on_time();
        let drift = if constant(&model.drift) {
            let mut v = vec![0.0; n];
            model.drift_into(0.0, &origin, &mut v)?;
            Some(v)
        } else {
            None
        };
        let mut stepper = Stepper {
            model,
            step: cfg.step,
            bridge: cfg.bridge,
            intensity_bound: cfg.intensity_bound,
            drift,
            root: None,
            scale: None,
            compensator: None,
            mode: JumpMode::None,
        };
        if constant(&model.diffusion) {
            stepper.root = Some(stepper.compute_root(0.0, &origin)?);
        }
        stepper.mode = match &model.jumps {
            _ if model.is_det_jump() => JumpMode::Scheduled,
            JumpKernel::None => JumpMode::None,
            JumpKernel::CompoundPoisson { law, .. } => {
                let m = truncated_mean(law, d, &model.truncation);
                if m.iter().any(|v| *v != 0.0) {
                    stepper.compensator = Some(m);
                }
                JumpMode::Poisson
            }
            JumpKernel::SymmetricAlphaStable { alpha, scale } => {
                if constant(scale) {
                    stepper.scale = Some(scale.eval_scalar(0.0, &origin[..d]).map_err(|_| {
                        Error::OutOfDomain {
                            field: "jumps.scale".into(),
                            s: 0.0,
                            x: origin.clone(),
                        }
                    })?);
                }
                if scale.depends_on_state() {
                    let eps = cfg.small_jump_cutoff;
                    JumpMode::StableCutoff {
                        alpha: *alpha,
                        eps,
                        tail: stable_tail_mass(*alpha, d, eps),
                        small_var: stable_small_jump_variance(*alpha, d, eps),
                    }
                } else {
                    JumpMode::StableExact { alpha: *alpha }
                }
            }
        };
        Ok(stepper)
    }

    pub fn model(&self) -> &ProcessModel {
        self.model
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// True when increments are exact stable draws, for which bridge
    /// envelopes are not available.
    pub fn exact_stable(&self) -> bool {
        matches!(self.mode, JumpMode::StableExact { .. })
    }

    fn compute_root(&self, s: f64, x: &[f64]) -> Result<Root> {
        let d = self.model.dimension;
        Ok(match self.model.diffusion_block(s, x)? {
            DiffusionBlock::Zero => Root {
                factor: RootFactor::Zero,
                diag: vec![0.0; d],
            },
            DiffusionBlock::Isotropic(q) => {
                if q < 0.0 {
                    return Err(Error::NotPsd {
                        s,
                        x: x.to_vec(),
                        min_eigenvalue: q,
                    });
                }
                Root {
                    factor: if q == 0.0 {
                        RootFactor::Zero
                    } else {
                        RootFactor::Isotropic(q.sqrt())
                    },
                    diag: vec![q; d],
                }
            }
            DiffusionBlock::Full(v) => {
                let m = DMatrix::from_row_slice(d, d, &v);
                let sym = (&m + m.transpose()) * 0.5;
                let eig = SymmetricEigen::new(sym.clone());
                let rho = eig.eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                let min = eig.eigenvalues.iter().fold(f64::INFINITY, |a, v| a.min(*v));
                if min < -PSD_TOL * rho.max(f64::MIN_POSITIVE) {
                    return Err(Error::NotPsd {
                        s,
                        x: x.to_vec(),
                        min_eigenvalue: min,
                    });
                }
                let sqrt_l = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.max(0.0).sqrt()));
                let factor = &eig.eigenvectors * sqrt_l * eig.eigenvectors.transpose();
                Root {
                    factor: RootFactor::Full(factor),
                    diag: (0..d).map(|i| sym[(i, i)].max(0.0)).collect(),
                }
            }
        })
    }

    fn stable_scale(&self, s: f64, x: &[f64]) -> Result<f64> {
        if let Some(g) = self.scale {
            return Ok(g);
        }
        match self.model.local_kernel(s, x)?.jumps {
            LocalJumps::Stable { scale, .. } => Ok(scale),
            _ => Ok(0.0),
        }
    }

    /// Rate of the thinned jump stream at `(s, x)`.
    fn jump_rate(&self, s: f64, x: &[f64]) -> Result<f64> {
        match self.mode {
            JumpMode::Poisson => match self.model.local_kernel(s, x)?.jumps {
                LocalJumps::CompoundPoisson { intensity, .. } => Ok(intensity),
                _ => Ok(0.0),
            },
            JumpMode::StableCutoff { alpha, tail, .. } => {
                Ok(self.stable_scale(s, x)?.powf(alpha) * tail)
            }
            _ => Ok(0.0),
        }
    }

    /// Starting bound for thinning: the configured bound, or a margin over
    /// the largest rate along the frozen-state time slice.
    fn initial_bound(&self, tau: f64, x: &[f64], horizon: f64) -> Result<f64> {
        if !matches!(self.mode, JumpMode::Poisson | JumpMode::StableCutoff { .. }) {
            return Ok(0.0);
        }
        if let Some(b) = self.intensity_bound {
            return Ok(b);
        }
        let k = self.model.space_time_lift;
        let mut y = x.to_vec();
        let mut best: f64 = 0.0;
        for j in 0..=16 {
            let dt = horizon * j as f64 / 16.0;
            for (c, x0) in y[..k].iter_mut().zip(x) {
                *c = x0 + dt;
            }
            best = best.max(self.jump_rate(tau + dt, &y)?);
        }
        if !best.is_finite() {
            return Err(Error::IntensityBound {
                s: tau,
                x: x.to_vec(),
            });
        }
        if best == 0.0 && self.model.jumps.depends_on_state() {
            best = 1.0;
        }
        Ok(BOUND_SLACK * best)
    }

    /// Generates one path on `[tau, tau + horizon]`. `stops` must be
    /// ascending; stop times outside `(tau, tau + horizon]` are ignored.
    pub fn run<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        tau: f64,
        x0: &[f64],
        horizon: f64,
        stops: &[f64],
        mut visit: impl FnMut(Event<'_>) -> Flow,
    ) -> Result<()> {
        let n = self.model.state_dim();
        if x0.len() != n {
            return Err(Error::InvalidConfig(format!(
                "start state has dimension {}, model state dimension is {n}",
                x0.len()
            )));
        }
        let d = self.model.dimension;
        let mut sc = Scratch {
            drift: vec![0.0; n],
            noise: vec![0.0; d],
            old: vec![0.0; n],
            lo: vec![0.0; n],
            hi: vec![0.0; n],
            size: vec![0.0; n],
            before: vec![0.0; n],
        };
        let mut x = x0.to_vec();
        let mut t = tau;
        let end = tau + horizon;
        let tol = 1e-9 * self.step;
        let mut bound = self.initial_bound(tau, x0, horizon)?;
        let mut scheduled = match self.mode {
            JumpMode::Scheduled => {
                let clock = self.model.base_point(tau, x0).0;
                (clock < 1.0 && 1.0 - clock <= horizon + tol).then_some(tau + (1.0 - clock))
            }
            _ => None,
        };
        let mut stop_idx = stops.partition_point(|s| *s <= tau + tol);
        let mut k: u64 = 0;
        if visit(Event::Grid {
            t,
            x: &x,
            stop: None,
        }) == Flow::Halt
        {
            return Ok(());
        }
        while t < end - tol {
            let next_reg = tau + (k + 1) as f64 * self.step;
            let next_stop = stops.get(stop_idx).copied().unwrap_or(end).min(end);
            let (t_next, regular) = if next_stop < next_reg - tol {
                (next_stop, false)
            } else if next_stop <= next_reg + tol {
                (next_stop, true)
            } else {
                (next_reg, true)
            };
            if self.advance(
                rng,
                t,
                t_next,
                &mut x,
                &mut bound,
                &mut scheduled,
                &mut sc,
                &mut visit,
            )? == Flow::Halt
            {
                return Ok(());
            }
            t = t_next;
            if regular {
                k += 1;
            }
            let stop = match stops.get(stop_idx) {
                Some(s) if *s <= t + tol => {
                    let i = stop_idx;
                    while stops.get(stop_idx).is_some_and(|s| *s <= t + tol) {
                        stop_idx += 1;
                    }
                    Some(i)
                }
                _ => None,
            };
            if visit(Event::Grid { t, x: &x, stop }) == Flow::Halt {
                return Ok(());
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn advance<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        t: f64,
        t_next: f64,
        x: &mut [f64],
        bound: &mut f64,
        scheduled: &mut Option<f64>,
        sc: &mut Scratch,
        visit: &mut impl FnMut(Event<'_>) -> Flow,
    ) -> Result<Flow> {
        let mut s = t;
        while s < t_next {
            let candidate = if *bound > 0.0 {
                let e: f64 = Exp1.sample(rng);
                s + e / *bound
            } else {
                f64::INFINITY
            };
            let sched = scheduled.filter(|j| *j > s && *j <= t_next);
            let (seg_end, is_sched, is_cand) = match sched {
                Some(j) if j <= candidate => (j, true, false),
                _ if candidate < t_next => (candidate, false, true),
                _ => (t_next, false, false),
            };
            if self.euler(rng, s, seg_end, x, sc)?
                && visit(Event::Envelope {
                    t_end: seg_end,
                    lo: &sc.lo,
                    hi: &sc.hi,
                }) == Flow::Halt
            {
                return Ok(Flow::Halt);
            }
            s = seg_end;
            let jumped = if is_sched {
                *scheduled = None;
                let k = self.model.space_time_lift;
                sc.size
                    .iter_mut()
                    .enumerate()
                    .for_each(|(i, v)| *v = if i < k { 0.0 } else { 1.0 });
                true
            } else if is_cand {
                let rate = self.jump_rate(s, x)?;
                if !rate.is_finite() {
                    return Err(Error::IntensityBound { s, x: x.to_vec() });
                }
                let accept = if rate > *bound {
                    *bound = BOUND_SLACK * rate;
                    true
                } else {
                    rng.random::<f64>() * *bound < rate
                };
                if accept {
                    self.sample_jump(rng, s, x, sc)?;
                }
                accept
            } else {
                false
            };
            if jumped {
                sc.before.copy_from_slice(x);
                for (v, j) in x.iter_mut().zip(&sc.size) {
                    *v += j;
                }
                if visit(Event::Jump {
                    t: s,
                    before: &sc.before,
                    size: &sc.size,
                    after: x,
                }) == Flow::Halt
                {
                    return Ok(Flow::Halt);
                }
            }
        }
        Ok(Flow::Continue)
    }

    fn sample_jump<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        s: f64,
        x: &[f64],
        sc: &mut Scratch,
    ) -> Result<()> {
        let k = self.model.space_time_lift;
        sc.size[..k].iter_mut().for_each(|v| *v = 0.0);
        match self.mode {
            JumpMode::Poisson => {
                if let LocalJumps::CompoundPoisson { law, .. } =
                    self.model.local_kernel(s, x)?.jumps
                {
                    for v in sc.size[k..].iter_mut() {
                        *v = law.sample_coordinate(rng);
                    }
                }
            }
            JumpMode::StableCutoff { alpha, eps, .. } => {
                let u: f64 = 1.0 - rng.random::<f64>();
                let rho = eps * u.powf(-1.0 / alpha);
                unit_direction(rng, &mut sc.size[k..]);
                sc.size[k..].iter_mut().for_each(|v| *v *= rho);
            }
            _ => {}
        }
        Ok(())
    }

    /// Advances `x` from `s` to `s_end`. Returns true when an envelope was
    /// written to the scratch buffers.
    fn euler<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        s: f64,
        s_end: f64,
        x: &mut [f64],
        sc: &mut Scratch,
    ) -> Result<bool> {
        let dt = s_end - s;
        if dt <= 0.0 {
            return Ok(false);
        }
        let k = self.model.space_time_lift;
        let d = self.model.dimension;
        match &self.drift {
            Some(v) => sc.drift.copy_from_slice(v),
            None => self.model.drift_into(s, x, &mut sc.drift)?,
        }
        let computed;
        let root = match &self.root {
            Some(r) => r,
            None => {
                computed = self.compute_root(s, x)?;
                &computed
            }
        };
        let gamma = match self.mode {
            JumpMode::StableExact { .. } | JumpMode::StableCutoff { .. } => {
                self.stable_scale(s, x)?
            }
            _ => 0.0,
        };
        if self.bridge {
            sc.old.copy_from_slice(x);
        }
        if let Some(m) = &self.compensator {
            let rate = self.jump_rate(s, x)?;
            for (b, mi) in sc.drift[k..].iter_mut().zip(m) {
                *b -= rate * mi;
            }
        }
        for (v, b) in x.iter_mut().zip(&sc.drift) {
            *v += b * dt;
        }
        let sqrt_dt = dt.sqrt();
        match &root.factor {
            RootFactor::Zero => {}
            RootFactor::Isotropic(sigma) => {
                for v in x[k..].iter_mut() {
                    let z: f64 = StandardNormal.sample(rng);
                    *v += sigma * sqrt_dt * z;
                }
            }
            RootFactor::Full(m) => {
                for z in sc.noise.iter_mut() {
                    *z = StandardNormal.sample(rng);
                }
                for i in 0..d {
                    let mut acc = 0.0;
                    for j in 0..d {
                        acc += m[(i, j)] * sc.noise[j];
                    }
                    x[k + i] += acc * sqrt_dt;
                }
            }
        }
        let mut small_var = 0.0;
        match self.mode {
            JumpMode::StableExact { alpha } if gamma > 0.0 => {
                isotropic_stable(alpha, rng, &mut sc.noise);
                let c = gamma * dt.powf(1.0 / alpha);
                for (v, z) in x[k..].iter_mut().zip(&sc.noise) {
                    *v += c * z;
                }
            }
            JumpMode::StableCutoff {
                alpha,
                small_var: var,
                ..
            } if gamma > 0.0 => {
                small_var = gamma.powf(alpha) * var;
                let c = (small_var * dt).sqrt();
                for v in x[k..].iter_mut() {
                    let z: f64 = StandardNormal.sample(rng);
                    *v += c * z;
                }
            }
            _ => {}
        }
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                field: "state".into(),
                s: s_end,
                x: x.to_vec(),
            });
        }
        if !self.bridge || self.exact_stable() {
            return Ok(false);
        }
        #[allow(clippy::needless_range_loop)]
        for i in 0..x.len() {
            let (a, b) = (sc.old[i], x[i]);
            let var = if i < k {
                0.0
            } else {
                (root.diag[i - k] + small_var) * dt
            };
            if var > 0.0 {
                let u1: f64 = 1.0 - rng.random::<f64>();
                let u2: f64 = 1.0 - rng.random::<f64>();
                let diff2 = (b - a) * (b - a);
                sc.hi[i] = 0.5 * (a + b + (diff2 - 2.0 * var * u1.ln()).sqrt());
                sc.lo[i] = 0.5 * (a + b - (diff2 - 2.0 * var * u2.ln()).sqrt());
            } else {
                sc.hi[i] = a.max(b);
                sc.lo[i] = a.min(b);
            }
        }
        Ok(true)
    }
}
