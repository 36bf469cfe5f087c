//! Growth and sector constants of a symbol over a sampling grid.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::Symbol;
use crate::error::{Error, Result};
use crate::model::ProcessModel;

const ZERO: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionGrid {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub frequencies: Vec<Vec<f64>>,
}

impl ConditionGrid {
    /// Times in `[0, s_max]`, the given states, and frequencies on a
    /// symmetric geometric ladder along each axis and the diagonal.
    pub fn standard(dim: usize, s_max: f64, states: Vec<Vec<f64>>) -> Self {
        let times = (0..=8).map(|i| s_max * i as f64 / 8.0).collect();
        let radii: Vec<f64> = (-12..=12).map(|k| 2f64.powf(k as f64 / 2.0)).collect();
        let mut frequencies = Vec::new();
        let mut directions: Vec<Vec<f64>> = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        if dim > 1 {
            let c = 1.0 / (dim as f64).sqrt();
            directions.push(vec![c; dim]);
        }
        for dir in &directions {
            for r in &radii {
                for sign in [-1.0, 1.0] {
                    frequencies.push(dir.iter().map(|v| sign * r * v).collect());
                }
            }
        }
        ConditionGrid {
            times,
            states,
            frequencies,
        }
    }
}

/// Sector constant `c₀`, or the report that `|Im p| ≤ c₀ Re p` cannot hold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SectorBound {
    Bounded { c0: f64 },
    Violated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionConstants {
    pub growth: f64,
    pub sector: SectorBound,
    /// `None` when the sector condition fails.
    pub kappa: Option<f64>,
}

impl ConditionConstants {
    pub fn require_kappa(&self) -> Result<f64> {
        self.kappa.ok_or_else(|| {
            Error::SectorViolated(
                "the symbol has no sector bound on the sampling grid, so h and the δ-indices are undefined".into(),
            )
        })
    }
}

/// `κ = 1 / (4 arctan(1 / (2 c₀)))`, continuously extended by `1/(2π)` at
/// `c₀ = 0`.
pub fn kappa(c0: f64) -> f64 {
    if c0 == 0.0 {
        1.0 / (2.0 * PI)
    } else {
        1.0 / (4.0 * (1.0 / (2.0 * c0)).atan())
    }
}

/// Growth constant `max |p| / (1 + ‖ξ‖²)` and sector constant
/// `max |Im p| / Re p` over the grid.
///
/// The sector bound is reported violated when some point has
/// `Re p ≤ 1e-12 < |Im p|`, and also when `Re p` vanishes at every nonzero
/// frequency (the constant process), where `h ≡ 0` and κ is meaningless.
pub fn condition_constants(
    model: &ProcessModel,
    grid: &ConditionGrid,
) -> Result<ConditionConstants> {
    if grid.times.is_empty() || grid.states.is_empty() || grid.frequencies.is_empty() {
        return Err(Error::InvalidConfig(
            "condition grid must be non-empty".into(),
        ));
    }
    let sym = Symbol::new(model)?;
    let mut growth: f64 = 0.0;
    let mut c0: f64 = 0.0;
    let mut violated = false;
    let mut any_positive = false;
    for &s in &grid.times {
        for x in &grid.states {
            for xi in &grid.frequencies {
                let p = sym.eval(s, x, xi)?;
                let n2: f64 = xi.iter().map(|v| v * v).sum();
                growth = growth.max(p.norm() / (1.0 + n2));
                if p.re > ZERO {
                    any_positive = true;
                    c0 = c0.max(p.im.abs() / p.re);
                } else if p.im.abs() > ZERO {
                    violated = true;
                }
            }
        }
    }
    let sector = if violated || !any_positive {
        SectorBound::Violated
    } else {
        SectorBound::Bounded { c0 }
    };
    let kappa = match sector {
        SectorBound::Bounded { c0 } => Some(kappa(c0)),
        SectorBound::Violated => None,
    };
    Ok(ConditionConstants {
        growth,
        sector,
        kappa,
    })
}
