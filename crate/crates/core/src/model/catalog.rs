//! Built-in model families.

use serde::{Deserialize, Serialize};

use super::field::CoefficientField;
use super::kernel::{JumpKernel, JumpLaw, Truncation};
use super::ProcessModel;

/// Family tag carried by catalog models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CatalogTag {
    /// Brownian motion with variance function `σ²(t)`, given as polynomial
    /// coefficients in increasing degree.
    AdditiveBm {
        variance: Vec<f64>,
    },
    PureDrift,
    AlphaStableLevy,
    CompoundPoisson,
    JumpDiffusion,
    /// Deterministic unit jump at clock time one, no other motion.
    DetJumpUnit,
}

impl CatalogTag {
    pub fn name(&self) -> &'static str {
        match self {
            CatalogTag::AdditiveBm { .. } => "additive-bm",
            CatalogTag::PureDrift => "pure-drift",
            CatalogTag::AlphaStableLevy => "alpha-stable-levy",
            CatalogTag::CompoundPoisson => "compound-poisson",
            CatalogTag::JumpDiffusion => "jump-diffusion",
            CatalogTag::DetJumpUnit => "det-jump-unit",
        }
    }
}

fn zeros(d: usize) -> CoefficientField {
    CoefficientField::constant(vec![0.0; d])
}

/// Brownian motion whose variance at time `t` is the polynomial
/// `variance[0] + variance[1] t + ...`; its diffusion is `σ²'(t) · I`.
pub fn additive_bm(d: usize, variance: Vec<f64>) -> ProcessModel {
    let slope = CoefficientField::polynomial_derivative(&variance);
    ProcessModel {
        dimension: d,
        space_time_lift: 0,
        drift: zeros(d),
        diffusion: CoefficientField::TimePolynomial {
            coefficients: vec![slope],
        },
        jumps: JumpKernel::None,
        truncation: Truncation::default(),
        catalog: Some(CatalogTag::AdditiveBm { variance }),
    }
}

pub fn pure_drift(velocity: Vec<f64>) -> ProcessModel {
    ProcessModel {
        dimension: velocity.len(),
        space_time_lift: 0,
        drift: CoefficientField::constant(velocity),
        diffusion: CoefficientField::scalar(0.0),
        jumps: JumpKernel::None,
        truncation: Truncation::default(),
        catalog: Some(CatalogTag::PureDrift),
    }
}

pub fn alpha_stable(d: usize, alpha: f64, scale: f64) -> ProcessModel {
    alpha_stable_with_scale(d, alpha, CoefficientField::scalar(scale))
}

/// Stable-like model whose scale may depend on time and state.
pub fn alpha_stable_with_scale(d: usize, alpha: f64, scale: CoefficientField) -> ProcessModel {
    ProcessModel {
        dimension: d,
        space_time_lift: 0,
        drift: zeros(d),
        diffusion: CoefficientField::scalar(0.0),
        jumps: JumpKernel::SymmetricAlphaStable { alpha, scale },
        truncation: Truncation::default(),
        catalog: Some(CatalogTag::AlphaStableLevy),
    }
}

pub fn compound_poisson(
    d: usize,
    intensity: f64,
    law: JumpLaw,
    truncation: Truncation,
) -> ProcessModel {
    ProcessModel {
        dimension: d,
        space_time_lift: 0,
        drift: zeros(d),
        diffusion: CoefficientField::scalar(0.0),
        jumps: JumpKernel::CompoundPoisson {
            intensity: CoefficientField::scalar(intensity),
            law,
        },
        truncation,
        catalog: Some(CatalogTag::CompoundPoisson),
    }
}

pub fn jump_diffusion(
    drift: Vec<f64>,
    variance_rate: f64,
    intensity: f64,
    law: JumpLaw,
) -> ProcessModel {
    ProcessModel {
        dimension: drift.len(),
        space_time_lift: 0,
        drift: CoefficientField::constant(drift),
        diffusion: CoefficientField::scalar(variance_rate),
        jumps: JumpKernel::CompoundPoisson {
            intensity: CoefficientField::scalar(intensity),
            law,
        },
        truncation: Truncation::default(),
        catalog: Some(CatalogTag::JumpDiffusion),
    }
}

pub fn det_jump_unit(d: usize) -> ProcessModel {
    ProcessModel {
        dimension: d,
        space_time_lift: 0,
        drift: zeros(d),
        diffusion: CoefficientField::scalar(0.0),
        jumps: JumpKernel::None,
        truncation: Truncation::default(),
        catalog: Some(CatalogTag::DetJumpUnit),
    }
}

/// One row of the built-in catalog.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub model: ProcessModel,
    pub symbol: &'static str,
    pub indices: &'static str,
    pub note: &'static str,
}

/// The reference parametrisation of every catalog family.
pub fn entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "additive-bm",
            model: additive_bm(1, vec![0.0, 1.0]),
            symbol: "1/2 ξ² ∂₊σ²(τ)",
            indices: "β = β̲ = δ = δ̄ = 2 at the start point and at infinity",
            note: "σ²(t) = t; variance function enters only through its right derivative",
        },
        CatalogEntry {
            name: "pure-drift",
            model: pure_drift(vec![2.0]),
            symbol: "-i ℓ·ξ",
            indices: "β_∞ = β₀ = 1; δ-indices undefined",
            note: "ℓ = 2; sector condition fails (Re p ≡ 0)",
        },
        CatalogEntry {
            name: "alpha-stable-levy",
            model: alpha_stable(1, 1.5, 1.0),
            symbol: "γ^α ‖ξ‖^α",
            indices: "all β- and δ-indices equal α (β_∞ = α)",
            note: "α = 1.5, γ = 1",
        },
        CatalogEntry {
            name: "compound-poisson",
            model: compound_poisson(
                1,
                1.0,
                JumpLaw::TwoPoint { size: 1.0 },
                Truncation::default(),
            ),
            symbol: "λ (1 - φ_J(ξ)) + i λ ξ·E[J χ(J)]",
            indices: "β_∞ = δ_∞ = 0; β₀ = δ₀ = 2",
            note: "λ = 1, jumps ±1; bounded symbol",
        },
        CatalogEntry {
            name: "jump-diffusion",
            model: jump_diffusion(
                vec![0.0],
                0.5,
                2.0,
                JumpLaw::Gaussian {
                    mean: 0.0,
                    std: 0.5,
                },
            ),
            symbol: "-i ℓ·ξ + 1/2 ξ'Qξ + λ (1 - φ_J(ξ)) + i λ ξ·E[J χ(J)]",
            indices: "β_∞ = δ_∞ = 2; β₀ = δ₀ = 2",
            note: "Q = 0.5, λ = 2, N(0, 0.25) jumps",
        },
        CatalogEntry {
            name: "det-jump-unit",
            model: det_jump_unit(1),
            symbol: "0",
            indices: "all indices 0",
            note: "symbol ≡ 0, uninformative: the path still jumps by one at time 1",
        },
    ]
}
