//! Process models given by their differential characteristics: drift `ℓ`,
//! diffusion `Q`, jump kernel `N` and truncation `χ`.

pub mod catalog;
pub mod field;
pub mod kernel;
pub mod spec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

pub use catalog::CatalogTag;
pub use field::{CoefficientField, Expr, Func};
pub use kernel::{JumpKernel, JumpLaw, Truncation, TruncationShape};
pub use spec::{model_hash, parse_model_spec, to_json, to_toml, ModelDocument, ModelFormat};

use crate::error::{Error, Result};

fn is_zero(v: &usize) -> bool {
    *v == 0
}

/// A non-homogeneous Itô process described by its characteristics.
///
/// When `space_time_lift = k > 0` the state is `(c_1, …, c_k, x)` with
/// `c_k` the clock of the underlying model; the lifted model is
/// time-homogeneous.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProcessModel {
    pub dimension: usize,
    #[serde(skip_serializing_if = "is_zero")]
    pub space_time_lift: usize,
    pub drift: CoefficientField,
    pub diffusion: CoefficientField,
    pub jumps: JumpKernel,
    pub truncation: Truncation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub catalog: Option<CatalogTag>,
}

/// Diffusion block acting on the base coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum DiffusionBlock {
    Zero,
    /// `q · I`
    Isotropic(f64),
    /// Row-major `d × d`.
    Full(Vec<f64>),
}

/// Jump kernel frozen at one `(s, x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LocalJumps {
    None,
    CompoundPoisson { intensity: f64, law: JumpLaw },
    Stable { alpha: f64, scale: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalKernel {
    /// Index of the first state coordinate the jumps act on.
    pub offset: usize,
    pub dim: usize,
    pub jumps: LocalJumps,
}

/// `(ℓ(s,x), Q(s,x), N_s(x,·))` at one point.
#[derive(Debug, Clone)]
pub struct Characteristics {
    pub drift: DVector<f64>,
    pub diffusion: DMatrix<f64>,
    pub kernel: LocalKernel,
}

impl ProcessModel {
    /// Dimension of the state vector, lift coordinates included.
    pub fn state_dim(&self) -> usize {
        self.dimension + self.space_time_lift
    }

    pub fn is_det_jump(&self) -> bool {
        matches!(self.catalog, Some(CatalogTag::DetJumpUnit))
    }

    /// Time and state at which the underlying coefficients are evaluated.
    pub fn base_point<'a>(&self, s: f64, x: &'a [f64]) -> (f64, &'a [f64]) {
        match self.space_time_lift {
            0 => (s, x),
            k => (x[k - 1], &x[k..]),
        }
    }

    pub fn time_independent(&self) -> bool {
        self.space_time_lift > 0
            || !(self.drift.depends_on_time()
                || self.diffusion.depends_on_time()
                || self.jumps.depends_on_time())
    }

    /// True when the coefficients do not depend on the state. Lifted models
    /// count as state dependent unless the base model is time independent.
    pub fn state_independent(&self) -> bool {
        let base = !(self.drift.depends_on_state()
            || self.diffusion.depends_on_state()
            || self.jumps.depends_on_state());
        if self.space_time_lift > 0 {
            base && !(self.drift.depends_on_time()
                || self.diffusion.depends_on_time()
                || self.jumps.depends_on_time())
        } else {
            base
        }
    }

    /// Homogeneous space-time counterpart: one more clock coordinate with
    /// unit drift, no diffusion and no jumps.
    pub fn lift_space_time(&self) -> ProcessModel {
        ProcessModel {
            space_time_lift: self.space_time_lift + 1,
            ..self.clone()
        }
    }

    fn field_error(name: &str, s: f64, x: &[f64]) -> Error {
        Error::OutOfDomain {
            field: name.into(),
            s,
            x: x.to_vec(),
        }
    }

    fn nonfinite(name: &str, s: f64, x: &[f64]) -> Error {
        Error::NonFinite {
            field: name.into(),
            s,
            x: x.to_vec(),
        }
    }

    /// Writes `ℓ(s,x)` for the full state into `out`.
    pub fn drift_into(&self, s: f64, x: &[f64], out: &mut [f64]) -> Result<()> {
        let k = self.space_time_lift;
        out[..k].iter_mut().for_each(|v| *v = 1.0);
        let (bs, bx) = self.base_point(s, x);
        self.drift
            .eval_into(bs, bx, &mut out[k..])
            .map_err(|_| Self::field_error("drift", s, x))?;
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Self::nonfinite("drift", s, x));
        }
        Ok(())
    }

    pub fn diffusion_block(&self, s: f64, x: &[f64]) -> Result<DiffusionBlock> {
        let (bs, bx) = self.base_point(s, x);
        if self.diffusion.is_zero() {
            return Ok(DiffusionBlock::Zero);
        }
        let values = self
            .diffusion
            .eval(bs, bx)
            .map_err(|_| Self::field_error("diffusion", s, x))?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Self::nonfinite("diffusion", s, x));
        }
        Ok(if values.len() == 1 {
            DiffusionBlock::Isotropic(values[0])
        } else {
            DiffusionBlock::Full(values)
        })
    }

    /// `Q(s,x)` for the full state.
    pub fn diffusion_matrix(&self, s: f64, x: &[f64]) -> Result<DMatrix<f64>> {
        let n = self.state_dim();
        let k = self.space_time_lift;
        let d = self.dimension;
        let mut m = DMatrix::zeros(n, n);
        match self.diffusion_block(s, x)? {
            DiffusionBlock::Zero => {}
            DiffusionBlock::Isotropic(q) => {
                for i in 0..d {
                    m[(k + i, k + i)] = q;
                }
            }
            DiffusionBlock::Full(v) => {
                for i in 0..d {
                    for j in 0..d {
                        m[(k + i, k + j)] = v[i * d + j];
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn local_kernel(&self, s: f64, x: &[f64]) -> Result<LocalKernel> {
        let (bs, bx) = self.base_point(s, x);
        let jumps = match &self.jumps {
            JumpKernel::None => LocalJumps::None,
            JumpKernel::CompoundPoisson { intensity, law } => {
                let lambda = intensity
                    .eval_scalar(bs, bx)
                    .map_err(|_| Self::field_error("jumps.intensity", s, x))?;
                if !lambda.is_finite() || lambda < 0.0 {
                    return Err(Error::IntensityBound { s, x: x.to_vec() });
                }
                LocalJumps::CompoundPoisson {
                    intensity: lambda,
                    law: *law,
                }
            }
            JumpKernel::SymmetricAlphaStable { alpha, scale } => {
                let gamma = scale
                    .eval_scalar(bs, bx)
                    .map_err(|_| Self::field_error("jumps.scale", s, x))?;
                if !gamma.is_finite() {
                    return Err(Self::nonfinite("jumps.scale", s, x));
                }
                if gamma < 0.0 {
                    return Err(Error::HypothesisViolated(format!(
                        "negative stable scale {gamma} at s={s}, x={x:?}"
                    )));
                }
                LocalJumps::Stable {
                    alpha: *alpha,
                    scale: gamma,
                }
            }
        };
        Ok(LocalKernel {
            offset: self.space_time_lift,
            dim: self.dimension,
            jumps,
        })
    }

    pub fn eval_characteristics(&self, s: f64, x: &[f64]) -> Result<Characteristics> {
        let mut drift = DVector::zeros(self.state_dim());
        self.drift_into(s, x, drift.as_mut_slice())?;
        Ok(Characteristics {
            drift,
            diffusion: self.diffusion_matrix(s, x)?,
            kernel: self.local_kernel(s, x)?,
        })
    }
}

/// Compact `(s, x)` region sampled by [`validate_model`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationBox {
    pub time: (f64, f64),
    /// One interval per state coordinate.
    pub space: Vec<(f64, f64)>,
    /// Grid points per axis.
    pub resolution: usize,
}

impl ValidationBox {
    pub fn new(time: (f64, f64), space: Vec<(f64, f64)>) -> Self {
        ValidationBox {
            time,
            space,
            resolution: 9,
        }
    }

    fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        if n <= 1 || lo == hi {
            return vec![lo];
        }
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    }

    pub fn times(&self) -> Vec<f64> {
        Self::axis(self.time.0, self.time.1, self.resolution)
    }

    /// Cartesian grid of state points.
    pub fn states(&self) -> Vec<Vec<f64>> {
        let axes: Vec<Vec<f64>> = self
            .space
            .iter()
            .map(|&(lo, hi)| Self::axis(lo, hi, self.resolution))
            .collect();
        cartesian(&axes)
    }
}

pub(crate) fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![vec![]], |acc, axis| {
        acc.iter()
            .flat_map(|p| {
                axis.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(*v);
                    q
                })
            })
            .collect()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdViolation {
    pub s: f64,
    pub x: Vec<f64>,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub max_drift_norm: f64,
    /// Largest spectral norm of `Q`.
    pub max_diffusion_norm: f64,
    /// Largest `∫ (1 ∧ ‖y‖²) N_s(x, dy)`.
    pub max_kernel_integral: f64,
    pub psd_violations: Vec<PsdViolation>,
    pub points: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.psd_violations.is_empty()
    }
}

/// Minimum eigenvalue and spectral radius of the symmetric part of `m`.
pub fn symmetric_spectrum(m: &DMatrix<f64>) -> (f64, f64) {
    if m.nrows() == 0 {
        return (0.0, 0.0);
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let min = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let rho = eig.eigenvalues.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    (min, rho)
}

/// True when `m` is symmetric and its spectrum clears the roundoff floor
/// `-1e-10 · spectral radius`.
pub fn is_psd(m: &DMatrix<f64>) -> bool {
    let asym = (m - m.transpose()).abs().max();
    let (min, rho) = symmetric_spectrum(m);
    asym <= 1e-12 * rho.max(1.0) && min >= -1e-10 * rho
}

/// Kernel integral `∫ (1 ∧ ‖y‖²) N(dy)` per unit intensity or unit scale.
pub(crate) fn kernel_unit_mass(jumps: &JumpKernel, d: usize) -> f64 {
    match jumps {
        JumpKernel::None => 0.0,
        JumpKernel::CompoundPoisson { law, .. } => {
            law.expectation(d, &|y| y.iter().map(|v| v * v).sum::<f64>().min(1.0))
        }
        JumpKernel::SymmetricAlphaStable { alpha, .. } => {
            kernel::stable_density_constant(*alpha, d)
                * kernel::sphere_area(d)
                * (1.0 / (2.0 - alpha) + 1.0 / alpha)
        }
    }
}

/// Samples the coefficients over `region` and reports their sizes and any
/// loss of positive semidefiniteness.
pub fn validate_model(model: &ProcessModel, region: &ValidationBox) -> Result<ValidationReport> {
    if region.space.len() != model.state_dim() {
        return Err(Error::InvalidConfig(format!(
            "validation box has {} state axes, model has {}",
            region.space.len(),
            model.state_dim()
        )));
    }
    let finite = |a: f64, b: f64| a.is_finite() && b.is_finite() && a <= b;
    if !finite(region.time.0, region.time.1) || region.space.iter().any(|&(a, b)| !finite(a, b)) {
        return Err(Error::InvalidConfig(
            "validation box must have finite, ordered extents".into(),
        ));
    }
    let unit = kernel_unit_mass(&model.jumps, model.dimension);
    let mut report = ValidationReport {
        max_drift_norm: 0.0,
        max_diffusion_norm: 0.0,
        max_kernel_integral: 0.0,
        psd_violations: vec![],
        points: 0,
    };
    for s in region.times() {
        for x in region.states() {
            let ch = model.eval_characteristics(s, &x)?;
            report.points += 1;
            report.max_drift_norm = report.max_drift_norm.max(ch.drift.norm());
            let (min, rho) = symmetric_spectrum(&ch.diffusion);
            report.max_diffusion_norm = report.max_diffusion_norm.max(rho);
            if !is_psd(&ch.diffusion) {
                report.psd_violations.push(PsdViolation {
                    s,
                    x: x.clone(),
                    min_eigenvalue: min,
                });
            }
            let mass = match ch.kernel.jumps {
                LocalJumps::None => 0.0,
                LocalJumps::CompoundPoisson { intensity, .. } => intensity * unit,
                LocalJumps::Stable { alpha, scale } => scale.powf(alpha) * unit,
            };
            if !mass.is_finite() {
                return Err(Error::NonFinite {
                    field: "jumps".into(),
                    s,
                    x,
                });
            }
            report.max_kernel_integral = report.max_kernel_integral.max(mass);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lifted_characteristics_have_block_structure() {
        let m = catalog::additive_bm(1, vec![0.0, 0.0, 1.0]).lift_space_time();
        let ch = m.eval_characteristics(5.0, &[1.5, 0.3]).unwrap();
        assert_eq!(ch.drift.as_slice(), &[1.0, 0.0]);
        // Q evaluated at the inner clock 1.5: σ²' = 2·1.5
        assert_eq!(ch.diffusion[(1, 1)], 3.0);
        assert_eq!(ch.diffusion[(0, 0)], 0.0);
        assert_eq!(ch.kernel.offset, 1);
    }

    #[test]
    fn cartesian_grid_size() {
        let g = cartesian(&[vec![0.0, 1.0], vec![0.0, 1.0, 2.0]]);
        assert_eq!(g.len(), 6);
        assert_eq!(g[5], vec![1.0, 2.0]);
    }
}
