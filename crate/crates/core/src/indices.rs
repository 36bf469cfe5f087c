//! The functionals `H`, `h` of the symbol and the Blumenthal–Getoor type
//! indices read off their log-log slopes.
//!
//! Suprema and infima over all times and states are taken over finite
//! grids; the reports carry a grid-refinement diagnostic.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ProcessModel;
use crate::stats::linear_fit;
use crate::symbol::{condition_constants, ConditionConstants, ConditionGrid, Symbol};

/// Points of the closed unit ball (origin excluded) on which the inner
/// supremum over `ε` is taken.
pub fn epsilon_grid(dim: usize, points: usize) -> Vec<Vec<f64>> {
    if dim == 1 {
        let half = (points / 2).max(1);
        return (1..=half)
            .flat_map(|j| {
                let v = j as f64 / half as f64;
                [vec![-v], vec![v]]
            })
            .collect();
    }
    let radii = 4;
    let count = (points / radii).max(1);
    let directions: Vec<Vec<f64>> = if dim == 2 {
        (0..count)
            .map(|j| {
                let a = 2.0 * PI * j as f64 / count as f64;
                vec![a.cos(), a.sin()]
            })
            .collect()
    } else {
        fibonacci_sphere(dim, count)
    };
    let mut out = Vec::with_capacity(count * radii);
    for r in 1..=radii {
        let r = r as f64 / radii as f64;
        for d in &directions {
            out.push(d.iter().map(|v| v * r).collect());
        }
    }
    out
}

/// Quasi-uniform directions: a Fibonacci lattice on the 2-sphere embedded
/// in the first three coordinates, with the remaining axes appended.
fn fibonacci_sphere(dim: usize, count: usize) -> Vec<Vec<f64>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    let mut out: Vec<Vec<f64>> = (0..count)
        .map(|j| {
            let z = 1.0 - 2.0 * (j as f64 + 0.5) / count as f64;
            let r = (1.0 - z * z).sqrt();
            let a = golden * j as f64;
            let mut v = vec![0.0; dim];
            v[0] = r * a.cos();
            v[1] = r * a.sin();
            v[2] = z;
            v
        })
        .collect();
    for k in 3..dim {
        for s in [-1.0, 1.0] {
            let mut v = vec![0.0; dim];
            v[k] = s;
            out.push(v);
        }
    }
    out
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Geometric grid of `n` points from `a` to `b`.
pub fn geometric_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    linspace(la, lb, n).into_iter().map(f64::exp).collect()
}

fn box_points(center: &[f64], half_width: f64, per_axis: usize) -> Vec<Vec<f64>> {
    let axis = linspace(-half_width, half_width, per_axis);
    let mut out = vec![Vec::with_capacity(center.len())];
    for c in center {
        out = out
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |a| {
                    let mut q = p.clone();
                    q.push(c + a);
                    q
                })
            })
            .collect();
    }
    out
}

/// Sampling grids standing in for `sup_{s ≥ 0} sup_{y}` and the ε-ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexGrids {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub epsilons: Vec<Vec<f64>>,
    /// Points per axis of the local `2R`-ball around `x`.
    pub local_points: usize,
}

impl IndexGrids {
    /// `s ∈ [0, 10]` with 64 points, `y` in the box of half-width 10 with 33
    /// points per axis (9 above two dimensions), 64 ε points. Axes the
    /// model does not depend on collapse to one point.
    pub fn default_for(model: &ProcessModel) -> Self {
        let n = model.state_dim();
        let per_axis = if n <= 2 { 33 } else { 9 };
        IndexGrids {
            times: if model.time_independent() {
                vec![0.0]
            } else {
                linspace(0.0, 10.0, 64)
            },
            states: if model.state_independent() {
                vec![vec![0.0; n]]
            } else {
                box_points(&vec![0.0; n], 10.0, per_axis)
            },
            epsilons: epsilon_grid(n, 64),
            local_points: if n <= 2 { 33 } else { 9 },
        }
    }

    /// Grids with roughly twice the points along every axis.
    pub fn refined(&self, model: &ProcessModel) -> Self {
        let n = model.state_dim();
        let refine_axis = |v: &[f64]| -> Vec<f64> {
            if v.len() <= 1 {
                return v.to_vec();
            }
            let mut out = Vec::with_capacity(2 * v.len());
            for w in v.windows(2) {
                out.push(w[0]);
                out.push(0.5 * (w[0] + w[1]));
            }
            out.push(v[v.len() - 1]);
            out
        };
        let states = if self.states.len() <= 1 {
            self.states.clone()
        } else {
            let per_axis = (self.states.len() as f64).powf(1.0 / n as f64).round() as usize;
            let lo = self.states[0][0];
            let hi = self.states[self.states.len() - 1][0];
            let center = vec![0.5 * (lo + hi); n];
            box_points(&center, 0.5 * (hi - lo), 2 * per_axis - 1)
        };
        IndexGrids {
            times: refine_axis(&self.times),
            states,
            epsilons: epsilon_grid(n, 2 * self.epsilons.len()),
            local_points: 2 * self.local_points - 1,
        }
    }
}

/// Where the suprema and infima over `(s, y)` range.
#[derive(Debug, Clone, Copy)]
pub enum Region<'a> {
    /// All grid times and states.
    Global(&'a IndexGrids),
    /// Fixed time, states in the max-norm ball of radius `2R` around `x`.
    Local {
        grids: &'a IndexGrids,
        tau: f64,
        x: &'a [f64],
    },
}

fn for_points(
    region: Region<'_>,
    radius: f64,
    mut f: impl FnMut(f64, &[f64]) -> Result<()>,
) -> Result<()> {
    match region {
        Region::Global(g) => {
            for &s in &g.times {
                for y in &g.states {
                    f(s, y)?;
                }
            }
        }
        Region::Local { grids, tau, x } => {
            for y in box_points(x, 2.0 * radius, grids.local_points) {
                f(tau, &y)?;
            }
        }
    }
    Ok(())
}

fn epsilons<'a>(region: &Region<'a>) -> &'a [Vec<f64>] {
    match region {
        Region::Global(g) => &g.epsilons,
        Region::Local { grids, .. } => &grids.epsilons,
    }
}

/// `H(R) = sup_{s,y} sup_{‖ε‖≤1} |p(s, y, ε/R)|`.
pub fn upper_functional(model: &ProcessModel, radius: f64, region: Region<'_>) -> Result<f64> {
    let sym = Symbol::new(model)?;
    let eps = epsilons(&region);
    let mut best: f64 = 0.0;
    let mut xi = vec![0.0; model.state_dim()];
    for_points(region, radius, |s, y| {
        for e in eps {
            for (v, w) in xi.iter_mut().zip(e) {
                *v = w / radius;
            }
            best = best.max(sym.eval(s, y, &xi)?.norm());
        }
        Ok(())
    })?;
    Ok(best)
}

/// `h(R) = inf_{s,y} sup_{‖ε‖≤1} Re p(s, y, ε/(4κR))`.
pub fn lower_functional(
    model: &ProcessModel,
    radius: f64,
    kappa: f64,
    region: Region<'_>,
) -> Result<f64> {
    let sym = Symbol::new(model)?;
    let eps = epsilons(&region);
    let scale = 4.0 * kappa * radius;
    let mut worst = f64::INFINITY;
    let mut xi = vec![0.0; model.state_dim()];
    for_points(region, radius, |s, y| {
        let mut best = f64::NEG_INFINITY;
        for e in eps {
            for (v, w) in xi.iter_mut().zip(e) {
                *v = w / scale;
            }
            best = best.max(sym.eval(s, y, &xi)?.re);
        }
        worst = worst.min(best);
        Ok(())
    })?;
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// `R → 0`
    ToZero,
    /// `R → ∞`
    ToInfinity,
}

/// Power-law fit of a curve `R ↦ v(R) ~ R^{-exponent}` toward the limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexFit {
    pub direction: Direction,
    /// Least-squares exponent over the half of the grid nearest the limit.
    pub exponent: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
    /// Exponents over windows of four consecutive points, ordered toward
    /// the limit.
    pub window_exponents: Vec<f64>,
    pub window_radii: Vec<f64>,
    pub max_exponent: f64,
    pub min_exponent: f64,
}

pub const WINDOW: usize = 4;
const MAX_SPREAD: f64 = 0.5;

/// Fits `log v` against `log R` on the half of the samples nearest the
/// limit. The limsup/liminf type indices are the largest and smallest
/// windowed exponents.
pub fn extract_indices(samples: &[(f64, f64)], direction: Direction) -> Result<IndexFit> {
    if samples.len() < 6 {
        return Err(Error::InvalidConfig(
            "at least 6 samples are required".into(),
        ));
    }
    let mut pts: Vec<(f64, f64)> = samples.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    if direction == Direction::ToZero {
        pts.reverse();
    }
    let tail = &pts[pts.len() / 2..];
    if tail.iter().all(|(r, v)| *r > 0.0 && *v == 0.0) {
        return Ok(IndexFit::vanishing(direction, tail));
    }
    if tail
        .iter()
        .any(|(r, v)| !(*r > 0.0 && *v > 0.0 && v.is_finite()))
    {
        return Err(Error::IllPosedFit {
            spread: f64::INFINITY,
        });
    }
    let lr: Vec<f64> = tail.iter().map(|p| p.0.ln()).collect();
    let lv: Vec<f64> = tail.iter().map(|p| p.1.ln()).collect();
    let (intercept, slope, residuals) = linear_fit(&lr, &lv);
    let mut window_exponents = Vec::new();
    let mut window_radii = Vec::new();
    for start in 0..=lr.len().saturating_sub(WINDOW) {
        let (_, s, _) = linear_fit(&lr[start..start + WINDOW], &lv[start..start + WINDOW]);
        window_exponents.push(-s + 0.0);
        window_radii.push((0.5 * (lr[start] + lr[start + WINDOW - 1])).exp());
    }
    let max_exponent = window_exponents
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let min_exponent = window_exponents
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let spread = max_exponent - min_exponent;
    if spread > MAX_SPREAD {
        return Err(Error::IllPosedFit { spread });
    }
    Ok(IndexFit {
        direction,
        exponent: -slope + 0.0,
        intercept,
        residuals,
        window_exponents,
        window_radii,
        max_exponent,
        min_exponent,
    })
}

impl IndexFit {
    /// A curve that is identically zero: `R^λ v(R) → 0` for every `λ ≥ 0`,
    /// so every index is zero. The intercept is reported as zero.
    fn vanishing(direction: Direction, tail: &[(f64, f64)]) -> Self {
        let windows = tail.len().saturating_sub(WINDOW) + 1;
        IndexFit {
            direction,
            exponent: 0.0,
            intercept: 0.0,
            residuals: vec![0.0; tail.len()],
            window_exponents: vec![0.0; windows],
            window_radii: tail
                .windows(WINDOW)
                .map(|w| (w[0].0 * w[WINDOW - 1].0).sqrt())
                .collect(),
            max_exponent: 0.0,
            min_exponent: 0.0,
        }
    }
}

/// The four indices of one family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexSet {
    pub beta: f64,
    pub beta_under: f64,
    /// `None` when the sector condition fails.
    pub delta_bar: Option<f64>,
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub name: String,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub fit: IndexFit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCheck {
    pub curve: String,
    pub radius: f64,
    pub value: f64,
    pub refined: f64,
    pub relative_change: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalIndices {
    pub tau: f64,
    pub x: Vec<f64>,
    pub indices: IndexSet,
    pub curves: Vec<Curve>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub at_start: IndexSet,
    pub start_curves: Vec<Curve>,
    pub at_infinity: Vec<LocalIndices>,
    pub start_radii: Vec<f64>,
    pub local_radii: Vec<f64>,
    pub constants: ConditionConstants,
    pub grid_checks: Vec<GridCheck>,
}

impl IndexReport {
    /// `β̲₀ ≥ β₀`, `δ₀ ≥ δ̄₀`, `β_∞ ≥ β̲_∞`, `δ̄_∞ ≥ δ_∞`.
    pub fn ordering_holds(&self) -> bool {
        let s = &self.at_start;
        let start = s.beta_under >= s.beta
            && match (s.delta, s.delta_bar) {
                (Some(a), Some(b)) => a >= b,
                _ => true,
            };
        start
            && self.at_infinity.iter().all(|l| {
                let i = &l.indices;
                i.beta >= i.beta_under
                    && match (i.delta_bar, i.delta) {
                        (Some(a), Some(b)) => a >= b,
                        _ => true,
                    }
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexConfig {
    pub grids: IndexGrids,
    pub start_radii: Vec<f64>,
    pub local_radii: Vec<f64>,
    /// Start points `(τ, x)` for the indices at infinity.
    pub points: Vec<(f64, Vec<f64>)>,
}

impl IndexConfig {
    /// 16-point geometric grids on `[1e1, 1e3]` and `[1e-3, 1e-1]`, one
    /// local point at the origin.
    pub fn default_for(model: &ProcessModel) -> Self {
        IndexConfig {
            grids: IndexGrids::default_for(model),
            start_radii: geometric_grid(1e1, 1e3, 16),
            local_radii: geometric_grid(1e-3, 1e-1, 16),
            points: vec![(0.0, vec![0.0; model.state_dim()])],
        }
    }
}

fn curve(
    name: &str,
    radii: &[f64],
    direction: Direction,
    f: impl Fn(f64) -> Result<f64>,
) -> Result<Curve> {
    let values = radii.iter().map(|&r| f(r)).collect::<Result<Vec<_>>>()?;
    let samples: Vec<(f64, f64)> = radii.iter().copied().zip(values.iter().copied()).collect();
    let fit = extract_indices(&samples, direction)?;
    Ok(Curve {
        name: name.into(),
        radii: radii.to_vec(),
        values,
        fit,
    })
}

fn sector_constants(model: &ProcessModel, cfg: &IndexConfig) -> Result<ConditionConstants> {
    let mut states = cfg.grids.states.clone();
    states.extend(cfg.points.iter().map(|p| p.1.clone()));
    let s_max = cfg.grids.times.iter().copied().fold(0.0, f64::max);
    let mut grid = ConditionGrid::standard(model.state_dim(), s_max, states);
    grid.times.extend(cfg.grids.times.iter().copied());
    grid.times.extend(cfg.points.iter().map(|p| p.0));
    grid.times.sort_by(f64::total_cmp);
    grid.times.dedup();
    condition_constants(model, &grid)
}

/// All eight indices: the starting-point family from the global
/// functionals as `R → ∞`, the family at infinity from the local
/// functionals at each configured point as `R → 0`.
pub fn index_report(model: &ProcessModel, cfg: &IndexConfig) -> Result<IndexReport> {
    let constants = sector_constants(model, cfg)?;
    let kappa = constants.kappa;
    let g = &cfg.grids;

    let big = curve("H-start", &cfg.start_radii, Direction::ToInfinity, |r| {
        upper_functional(model, r, Region::Global(g))
    })?;
    let small = match kappa {
        Some(k) => Some(curve(
            "h-start",
            &cfg.start_radii,
            Direction::ToInfinity,
            |r| lower_functional(model, r, k, Region::Global(g)),
        )?),
        None => None,
    };
    let at_start = IndexSet {
        beta: big.fit.min_exponent,
        beta_under: big.fit.max_exponent,
        delta_bar: small.as_ref().map(|c| c.fit.min_exponent),
        delta: small.as_ref().map(|c| c.fit.max_exponent),
    };

    let mut at_infinity = Vec::new();
    for (tau, x) in &cfg.points {
        let region = Region::Local {
            grids: g,
            tau: *tau,
            x,
        };
        let big = curve("H-local", &cfg.local_radii, Direction::ToZero, |r| {
            upper_functional(model, r, region)
        })?;
        let small = match kappa {
            Some(k) => Some(curve(
                "h-local",
                &cfg.local_radii,
                Direction::ToZero,
                |r| lower_functional(model, r, k, region),
            )?),
            None => None,
        };
        let indices = IndexSet {
            beta: big.fit.max_exponent,
            beta_under: big.fit.min_exponent,
            delta_bar: small.as_ref().map(|c| c.fit.max_exponent),
            delta: small.as_ref().map(|c| c.fit.min_exponent),
        };
        let mut curves = vec![big];
        curves.extend(small);
        at_infinity.push(LocalIndices {
            tau: *tau,
            x: x.clone(),
            indices,
            curves,
        });
    }

    let refined = g.refined(model);
    let mut grid_checks = Vec::new();
    let mid = cfg.start_radii[cfg.start_radii.len() / 2];
    let mut check = |name: &str, value: f64, refined: f64, radius: f64| {
        grid_checks.push(GridCheck {
            curve: name.into(),
            radius,
            value,
            refined,
            relative_change: if value == 0.0 {
                0.0
            } else {
                (refined - value).abs() / value.abs()
            },
        });
    };
    check(
        "H-start",
        upper_functional(model, mid, Region::Global(g))?,
        upper_functional(model, mid, Region::Global(&refined))?,
        mid,
    );
    if let Some(k) = kappa {
        check(
            "h-start",
            lower_functional(model, mid, k, Region::Global(g))?,
            lower_functional(model, mid, k, Region::Global(&refined))?,
            mid,
        );
    }

    let mut start_curves = vec![big];
    start_curves.extend(small);
    Ok(IndexReport {
        at_start,
        start_curves,
        at_infinity,
        start_radii: cfg.start_radii.clone(),
        local_radii: cfg.local_radii.clone(),
        constants,
        grid_checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::catalog;
    use crate::symbol::kappa;

    fn global(m: &ProcessModel) -> IndexGrids {
        IndexGrids::default_for(m)
    }

    #[test]
    fn closed_forms() {
        let drift = catalog::pure_drift(vec![2.0]);
        let g = global(&drift);
        assert!((upper_functional(&drift, 0.5, Region::Global(&g)).unwrap() - 4.0).abs() < 1e-12);

        let bm = catalog::additive_bm(1, vec![0.0, 1.0]);
        let g = global(&bm);
        let r = 0.3;
        assert!(
            (upper_functional(&bm, r, Region::Global(&g)).unwrap() - 0.5 / (r * r)).abs() < 1e-9
        );
        let h = lower_functional(&bm, r, kappa(0.0), Region::Global(&g)).unwrap();
        assert!((h - PI * PI / (8.0 * r * r)).abs() < 1e-9);

        let cauchy = catalog::alpha_stable(1, 1.0, 1.0);
        let g = global(&cauchy);
        let h = lower_functional(&cauchy, r, kappa(0.0), Region::Global(&g)).unwrap();
        assert!((h - PI / (2.0 * r)).abs() < 1e-9);
    }

    #[test]
    fn exact_power_law() {
        let samples: Vec<(f64, f64)> = geometric_grid(1e-3, 1e-1, 16)
            .into_iter()
            .map(|r| (r, r.powf(-1.5)))
            .collect();
        let fit = extract_indices(&samples, Direction::ToZero).unwrap();
        assert!((fit.exponent - 1.5).abs() < 1e-12);
        assert!(fit.residuals.iter().all(|r| r.abs() < 1e-12));
    }

    #[test]
    fn oscillating_samples_are_ill_posed() {
        let samples: Vec<(f64, f64)> = geometric_grid(1.0, 1e3, 16)
            .into_iter()
            .enumerate()
            .map(|(i, r)| (r, r.powf(if i % 2 == 0 { -1.0 } else { -3.0 })))
            .collect();
        assert!(matches!(
            extract_indices(&samples, Direction::ToInfinity),
            Err(Error::IllPosedFit { .. })
        ));
    }

    #[test]
    fn local_ball_reaches_the_boundary() {
        use crate::model::{CoefficientField, Expr};
        let scale = CoefficientField::Expression {
            components: vec![Expr::Add {
                terms: vec![Expr::Const { value: 1.0 }, Expr::Norm],
            }],
        };
        let m = catalog::alpha_stable_with_scale(1, 1.5, scale);
        let g = global(&m);
        let r = 0.05;
        let v = upper_functional(
            &m,
            r,
            Region::Local {
                grids: &g,
                tau: 0.0,
                x: &[0.0],
            },
        )
        .unwrap();
        let exact = (1.0 + 2.0 * r).powf(1.5) * r.powf(-1.5);
        assert!((v - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn epsilon_grid_sizes() {
        assert_eq!(epsilon_grid(1, 64).len(), 64);
        assert_eq!(epsilon_grid(2, 64).len(), 64);
        for e in epsilon_grid(3, 64) {
            assert!(e.iter().map(|v| v * v).sum::<f64>() <= 1.0 + 1e-12);
        }
    }
}
