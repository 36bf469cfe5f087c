//! Monte Carlo estimation of the symbol from its limit definition
//! `p(τ,x,ξ) = -lim_{h↓0} (E e^{i(X^σ_{τ+h} - x)'ξ} - 1) / h`, with `σ` the
//! first exit from the max-norm ball of radius `R`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ProcessModel;
use crate::simulate::{par_paths, run_stopped, stopped_config, SimConfig, Stepper};
use crate::stats::{linear_fit, pairwise_sum, variance};
use crate::symbol::SymbolValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extrapolation {
    SmallestLag,
    #[default]
    #[serde(rename = "richardson-2point")]
    Richardson2Point,
}

fn default_radius() -> f64 {
    1.0
}

fn default_lags() -> Vec<f64> {
    vec![4e-3, 2e-3, 1e-3]
}

fn default_step() -> f64 {
    f64::INFINITY
}

fn is_infinite(v: &f64) -> bool {
    v.is_infinite()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorConfig {
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "default_lags")]
    pub lags: Vec<f64>,
    pub paths: usize,
    #[serde(default)]
    pub extrapolation: Extrapolation,
    pub seed: u64,
    /// Upper bound on the Euler step; each lag uses at most `h / 64`.
    #[serde(default = "default_step", skip_serializing_if = "is_infinite")]
    pub step: f64,
}

impl EstimatorConfig {
    pub fn new(paths: usize, seed: u64) -> Self {
        EstimatorConfig {
            radius: default_radius(),
            lags: default_lags(),
            paths,
            extrapolation: Extrapolation::default(),
            seed,
            step: default_step(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) {
            return Err(Error::InvalidConfig(
                "estimator radius must be positive".into(),
            ));
        }
        if self.lags.is_empty() || self.lags.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
            return Err(Error::InvalidConfig(
                "lags must be positive and finite".into(),
            ));
        }
        if self.lags.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidConfig(
                "lags must be strictly decreasing".into(),
            ));
        }
        if self.paths < 100 {
            return Err(Error::InvalidConfig(
                "at least 100 paths per lag are required".into(),
            ));
        }
        if self.extrapolation == Extrapolation::Richardson2Point && self.lags.len() < 2 {
            return Err(Error::InvalidConfig(
                "richardson-2point needs at least two lags".into(),
            ));
        }
        if !(self.step > 0.0) {
            return Err(Error::InvalidConfig("step must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagEstimate {
    pub lag: f64,
    pub re: f64,
    pub im: f64,
    pub radius: f64,
    pub exited_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolEstimate {
    pub frequency: Vec<f64>,
    pub value: SymbolValue,
    pub lags: Vec<LagEstimate>,
    /// `|d p̂_h / dh| · h_min` from a straight-line fit over the lags.
    pub bias_budget: f64,
    /// Confidence radius exceeds ten times the estimate.
    pub low_precision: bool,
}

/// Stopped increments `X^σ_{τ+h} - x` for every lag, sharing nothing
/// between lags.
struct Endpoints {
    lag: f64,
    increments: Vec<Vec<f64>>,
    exited: usize,
}

fn endpoints(
    model: &ProcessModel,
    tau: f64,
    x: &[f64],
    cfg: &EstimatorConfig,
) -> Result<Vec<Endpoints>> {
    cfg.validate()?;
    if x.len() != model.state_dim() {
        return Err(Error::InvalidConfig(format!(
            "start state has dimension {}, model state dimension is {}",
            x.len(),
            model.state_dim()
        )));
    }
    let mut out = Vec::with_capacity(cfg.lags.len());
    for (block, &lag) in cfg.lags.iter().enumerate() {
        let sim = stopped_config(&SimConfig::new(cfg.step.min(lag), lag, cfg.seed), lag);
        let stepper = Stepper::new(model, &sim)?;
        let ends = par_paths(cfg.paths, cfg.seed, block as u64, |rng, _| {
            run_stopped(&stepper, rng, tau, x, cfg.radius, lag)
        })?;
        let exited = ends.iter().filter(|e| e.exited).count();
        let increments = ends
            .into_iter()
            .map(|e| e.state.iter().zip(x).map(|(a, b)| a - b).collect())
            .collect();
        out.push(Endpoints {
            lag,
            increments,
            exited,
        });
    }
    Ok(out)
}

fn lag_estimate(e: &Endpoints, xi: &[f64]) -> LagEstimate {
    let n = e.increments.len();
    let mut re = Vec::with_capacity(n);
    let mut im = Vec::with_capacity(n);
    for d in &e.increments {
        let theta: f64 = d.iter().zip(xi).map(|(a, b)| a * b).sum();
        let half = (0.5 * theta).sin();
        re.push(-2.0 * half * half);
        im.push(theta.sin());
    }
    let nf = n as f64;
    let h = e.lag;
    LagEstimate {
        lag: h,
        re: -pairwise_sum(&re) / nf / h + 0.0,
        im: -pairwise_sum(&im) / nf / h + 0.0,
        radius: 3.0 * (variance(&re) + variance(&im)).sqrt() / (h * nf.sqrt()),
        exited_fraction: e.exited as f64 / nf,
    }
}

fn combine(xi: &[f64], lags: Vec<LagEstimate>, rule: Extrapolation) -> SymbolEstimate {
    let (re, im, radius) = match rule {
        Extrapolation::SmallestLag => {
            let l = lags[lags.len() - 1];
            (l.re, l.im, l.radius)
        }
        Extrapolation::Richardson2Point => {
            let (a, b) = (lags[lags.len() - 2], lags[lags.len() - 1]);
            let w = a.lag - b.lag;
            (
                (a.lag * b.re - b.lag * a.re) / w + 0.0,
                (a.lag * b.im - b.lag * a.im) / w + 0.0,
                (a.lag * b.radius).hypot(b.lag * a.radius) / w,
            )
        }
    };
    let bias_budget = if lags.len() >= 2 {
        let hs: Vec<f64> = lags.iter().map(|l| l.lag).collect();
        let (_, sr, _) = linear_fit(&hs, &lags.iter().map(|l| l.re).collect::<Vec<_>>());
        let (_, si, _) = linear_fit(&hs, &lags.iter().map(|l| l.im).collect::<Vec<_>>());
        sr.hypot(si) * hs[hs.len() - 1]
    } else {
        0.0
    };
    SymbolEstimate {
        frequency: xi.to_vec(),
        value: SymbolValue {
            re,
            im,
            confidence_radius: Some(radius),
        },
        lags,
        bias_budget,
        low_precision: radius > 10.0 * re.hypot(im),
    }
}

/// Estimates `p(τ, x, ξ)` for every frequency in `xis` from one set of
/// stopped paths per lag.
pub fn estimate_symbols(
    model: &ProcessModel,
    tau: f64,
    x: &[f64],
    xis: &[Vec<f64>],
    cfg: &EstimatorConfig,
) -> Result<Vec<SymbolEstimate>> {
    if let Some(bad) = xis.iter().find(|xi| xi.len() != model.state_dim()) {
        return Err(Error::InvalidConfig(format!(
            "frequency {bad:?} does not match state dimension {}",
            model.state_dim()
        )));
    }
    let ends = endpoints(model, tau, x, cfg)?;
    Ok(xis
        .iter()
        .map(|xi| {
            let lags = ends.iter().map(|e| lag_estimate(e, xi)).collect();
            combine(xi, lags, cfg.extrapolation)
        })
        .collect())
}

pub fn estimate_symbol(
    model: &ProcessModel,
    tau: f64,
    x: &[f64],
    xi: &[f64],
    cfg: &EstimatorConfig,
) -> Result<SymbolEstimate> {
    Ok(estimate_symbols(model, tau, x, &[xi.to_vec()], cfg)?.remove(0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusCheck {
    pub first: SymbolEstimate,
    pub second: SymbolEstimate,
    pub difference: f64,
    pub combined_radius: f64,
    pub agree: bool,
    /// Both radii are at least ten times `sqrt(‖Q‖ h_max)` at the start.
    pub radii_well_separated: bool,
}

/// Estimates with radii `r1` and `r2` on common random numbers and flags
/// disagreement beyond the combined confidence radii.
pub fn radius_independence_check(
    model: &ProcessModel,
    tau: f64,
    x: &[f64],
    xi: &[f64],
    cfg: &EstimatorConfig,
    radii: (f64, f64),
) -> Result<RadiusCheck> {
    let run = |r: f64| {
        let c = EstimatorConfig {
            radius: r,
            ..cfg.clone()
        };
        estimate_symbol(model, tau, x, xi, &c)
    };
    let first = run(radii.0)?;
    let second = run(radii.1)?;
    let difference = (first.value.complex() - second.value.complex()).norm();
    let combined_radius = first.value.confidence_radius.unwrap_or(0.0)
        + second.value.confidence_radius.unwrap_or(0.0);
    let q = model.diffusion_matrix(tau, x)?;
    let scale = (q.norm() * cfg.lags[0]).sqrt();
    Ok(RadiusCheck {
        difference,
        combined_radius,
        agree: difference <= combined_radius,
        radii_well_separated: radii.0.min(radii.1) >= 10.0 * scale,
        first,
        second,
    })
}
