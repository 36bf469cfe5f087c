//! Upper and lower maximal inequalities for the running supremum
//! `S_t = sup_{τ≤s≤τ+t} ‖X_s - x‖_∞`:
//!
//! `P(S_t ≥ R) ≤ c_d · t · sup_{τ<s≤τ+t} H(s, x, R)` and
//! `P(S_t < R) ≤ c_k / (t · inf_{τ<s≤τ+t} h(s, x, R))`.

use serde::{Deserialize, Serialize};

use super::running_sups;
use crate::error::{Error, Result};
use crate::indices::{lower_functional, upper_functional, IndexGrids, Region};
use crate::model::{model_hash, ProcessModel};
use crate::stats::binomial_std_error;
use crate::symbol::{condition_constants, ConditionGrid};

fn default_true() -> bool {
    true
}

fn default_time_points() -> usize {
    8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaxInequalityConfig {
    #[serde(default)]
    pub side: InequalityKind,
    pub tau: f64,
    pub x: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub radii: Vec<f64>,
    pub paths: usize,
    pub seed: u64,
    pub step: f64,
    /// Bridge monitoring between grid points.
    #[serde(default = "default_true")]
    pub bridge: bool,
    /// `c_d` (upper) or `c_k` (lower); defaults `16 d` and `16`.
    #[serde(default)]
    pub constant: Option<f64>,
    /// Points of `(τ, τ+t]` over which `H` and `h` are optimized.
    #[serde(default = "default_time_points")]
    pub time_points: usize,
}

impl MaxInequalityConfig {
    pub fn new(
        x: Vec<f64>,
        t_grid: Vec<f64>,
        radii: Vec<f64>,
        paths: usize,
        seed: u64,
        step: f64,
    ) -> Self {
        MaxInequalityConfig {
            side: InequalityKind::Upper,
            tau: 0.0,
            x,
            t_grid,
            radii,
            paths,
            seed,
            step,
            bridge: true,
            constant: None,
            time_points: default_time_points(),
        }
    }

    fn validate(&self, model: &ProcessModel) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if self.x.len() != model.state_dim() {
            return bad("start state does not match the model dimension");
        }
        if self.t_grid.is_empty() || self.t_grid.iter().any(|t| !(*t > 0.0)) {
            return bad("t_grid must hold positive lags");
        }
        if self.radii.is_empty() || self.radii.iter().any(|r| !(*r > 0.0)) {
            return bad("radii must be positive");
        }
        if self.paths == 0 {
            return bad("paths must be positive");
        }
        if self.time_points == 0 {
            return bad("time_points must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InequalityKind {
    #[default]
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityCell {
    pub t: f64,
    pub radius: f64,
    /// Empirical `P(S_t ≥ R)` (upper) or `P(S_t < R)` (lower).
    pub lhs: f64,
    /// Three binomial standard errors.
    pub lhs_radius: f64,
    /// `sup H` (upper) or `inf h` (lower) over `(τ, τ+t]`.
    pub functional: f64,
    pub rhs: f64,
    pub constant: f64,
    pub margin: f64,
    pub pass: bool,
    /// Smallest constant making this cell hold at its point estimate.
    pub cell_constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub kind: InequalityKind,
    pub model_hash: String,
    pub seed: u64,
    pub paths: usize,
    pub step: f64,
    pub tau: f64,
    pub x: Vec<f64>,
    pub cells: Vec<InequalityCell>,
    /// `max` over cells of the cell constants.
    pub fitted_constant: f64,
}

impl InequalityReport {
    pub fn all_pass(&self) -> bool {
        self.cells.iter().all(|c| c.pass)
    }

    /// Fitted constant over the cells whose lag is in `ts`.
    pub fn fitted_over(&self, ts: &[f64]) -> f64 {
        self.cells
            .iter()
            .filter(|c| ts.iter().any(|t| (t - c.t).abs() <= 1e-12 * t.abs()))
            .map(|c| c.cell_constant)
            .fold(0.0, f64::max)
    }
}

fn time_slice(tau: f64, t: f64, points: usize, model: &ProcessModel) -> Vec<f64> {
    if model.time_independent() {
        return vec![tau + t];
    }
    (1..=points)
        .map(|j| tau + t * j as f64 / points as f64)
        .collect()
}

fn sampled(model: &ProcessModel, cfg: &MaxInequalityConfig) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let mut ts = cfg.t_grid.clone();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let rows = running_sups(
        model, cfg.tau, &cfg.x, &ts, cfg.step, cfg.bridge, cfg.paths, cfg.seed, 0,
    )?;
    Ok((ts, rows))
}

fn cell_stats(rows: &[Vec<f64>], j: usize, radius: f64, exceed: bool) -> (f64, f64) {
    let n = rows.len();
    let hits = rows.iter().filter(|r| (r[j] >= radius) == exceed).count();
    let p = hits as f64 / n as f64;
    (p, 3.0 * binomial_std_error(p, n))
}

/// Upper inequality. A cell with zero right-hand side but exits observed
/// is a structural failure.
pub fn check_max_inequality_upper(
    model: &ProcessModel,
    cfg: &MaxInequalityConfig,
) -> Result<InequalityReport> {
    cfg.validate(model)?;
    let constant = cfg.constant.unwrap_or(16.0 * model.dimension as f64);
    let (ts, rows) = sampled(model, cfg)?;
    let grids = IndexGrids::default_for(model);
    let mut cells = Vec::new();
    for &radius in &cfg.radii {
        for (j, &t) in ts.iter().enumerate() {
            let mut sup_h: f64 = 0.0;
            for s in time_slice(cfg.tau, t, cfg.time_points, model) {
                let region = Region::Local {
                    grids: &grids,
                    tau: s,
                    x: &cfg.x,
                };
                sup_h = sup_h.max(upper_functional(model, radius, region)?);
            }
            let (lhs, lhs_radius) = cell_stats(&rows, j, radius, true);
            if sup_h == 0.0 && lhs > 0.0 {
                return Err(Error::StructuralFailure { t, radius, lhs });
            }
            let rhs = constant * t * sup_h;
            let margin = rhs - (lhs - lhs_radius);
            cells.push(InequalityCell {
                t,
                radius,
                lhs,
                lhs_radius,
                functional: sup_h,
                rhs,
                constant,
                margin,
                pass: margin >= 0.0,
                cell_constant: if lhs == 0.0 { 0.0 } else { lhs / (t * sup_h) },
            });
        }
    }
    Ok(report(InequalityKind::Upper, model, cfg, cells))
}

/// Lower inequality; refused when the sector condition fails.
pub fn check_max_inequality_lower(
    model: &ProcessModel,
    cfg: &MaxInequalityConfig,
) -> Result<InequalityReport> {
    cfg.validate(model)?;
    let constant = cfg.constant.unwrap_or(16.0);
    let t_max = cfg.t_grid.iter().copied().fold(0.0, f64::max);
    let mut grid = ConditionGrid::standard(model.state_dim(), cfg.tau + t_max, vec![cfg.x.clone()]);
    if let Some(r) = cfg.radii.iter().copied().reduce(f64::max) {
        for y in [-2.0 * r, 2.0 * r] {
            grid.states.push(cfg.x.iter().map(|v| v + y).collect());
        }
    }
    let kappa = condition_constants(model, &grid)?.require_kappa()?;
    let (ts, rows) = sampled(model, cfg)?;
    let grids = IndexGrids::default_for(model);
    let mut cells = Vec::new();
    for &radius in &cfg.radii {
        for (j, &t) in ts.iter().enumerate() {
            let mut inf_h = f64::INFINITY;
            for s in time_slice(cfg.tau, t, cfg.time_points, model) {
                let region = Region::Local {
                    grids: &grids,
                    tau: s,
                    x: &cfg.x,
                };
                inf_h = inf_h.min(lower_functional(model, radius, kappa, region)?);
            }
            let (lhs, lhs_radius) = cell_stats(&rows, j, radius, false);
            let rhs = if inf_h > 0.0 {
                constant / (t * inf_h)
            } else {
                f64::INFINITY
            };
            let margin = rhs - (lhs - lhs_radius);
            cells.push(InequalityCell {
                t,
                radius,
                lhs,
                lhs_radius,
                functional: inf_h,
                rhs,
                constant,
                margin,
                pass: margin >= 0.0,
                cell_constant: lhs * t * inf_h,
            });
        }
    }
    Ok(report(InequalityKind::Lower, model, cfg, cells))
}

/// Runs the side named in the configuration.
pub fn check_max_inequality(
    model: &ProcessModel,
    cfg: &MaxInequalityConfig,
) -> Result<InequalityReport> {
    match cfg.side {
        InequalityKind::Upper => check_max_inequality_upper(model, cfg),
        InequalityKind::Lower => check_max_inequality_lower(model, cfg),
    }
}

fn report(
    kind: InequalityKind,
    model: &ProcessModel,
    cfg: &MaxInequalityConfig,
    cells: Vec<InequalityCell>,
) -> InequalityReport {
    let fitted_constant = cells.iter().map(|c| c.cell_constant).fold(0.0, f64::max);
    InequalityReport {
        kind,
        model_hash: model_hash(model),
        seed: cfg.seed,
        paths: cfg.paths,
        step: cfg.step,
        tau: cfg.tau,
        x: cfg.x.clone(),
        cells,
        fitted_constant,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::catalog;

    #[test]
    fn drift_cannot_exit_early() {
        let m = catalog::pure_drift(vec![1.0]);
        let cfg = MaxInequalityConfig::new(vec![0.0], vec![0.1, 0.2], vec![1.0], 100, 1, 0.01);
        let r = check_max_inequality_upper(&m, &cfg).unwrap();
        assert!(r.cells.iter().all(|c| c.lhs == 0.0 && c.pass));
    }

    #[test]
    fn constant_process_is_refused() {
        let m = catalog::det_jump_unit(1);
        let cfg = MaxInequalityConfig::new(vec![0.0], vec![0.1], vec![1.0], 100, 1, 0.01);
        assert!(matches!(
            check_max_inequality_lower(&m, &cfg),
            Err(Error::SectorViolated(_))
        ));
    }

    #[test]
    fn long_time_small_ball() {
        let m = catalog::additive_bm(1, vec![0.0, 1.0]);
        let cfg = MaxInequalityConfig::new(vec![0.0], vec![100.0], vec![0.1], 200, 3, 0.05);
        let r = check_max_inequality_lower(&m, &cfg).unwrap();
        assert_eq!(r.cells[0].lhs, 0.0);
        assert!(r.cells[0].pass && r.cells[0].rhs > 0.0);
    }
}
