//! The time-dependent probabilistic symbol
//! `p(τ,x,ξ) = -iℓ'ξ + ½ξ'Qξ - ∫ (e^{iy'ξ} - 1 - iy'ξ χ(y)) N_τ(x,dy)`.

pub mod additive;
pub mod conditions;
pub mod levy;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use additive::{
    additive_bm_symbol, right_derivative, symbol_additive, AdditiveCharacteristics,
};
pub use conditions::{condition_constants, kappa, ConditionConstants, ConditionGrid, SectorBound};
pub use levy::{jump_part_closed, jump_part_quadrature};

use crate::error::{Error, Result};
use crate::model::{DiffusionBlock, JumpKernel, ProcessModel};
use crate::quad::Quadrature;

/// A symbol value; `confidence_radius` is set only by Monte Carlo
/// estimators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolValue {
    pub re: f64,
    pub im: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence_radius: Option<f64>,
}

impl SymbolValue {
    pub fn analytic(p: Complex64) -> Self {
        SymbolValue {
            re: p.re,
            im: p.im,
            confidence_radius: None,
        }
    }

    pub fn complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Symbol evaluator for one model, caching the truncated jump mean.
#[derive(Debug, Clone)]
pub struct Symbol<'m> {
    model: &'m ProcessModel,
    compensator: Vec<f64>,
    quad: Quadrature,
}

impl<'m> Symbol<'m> {
    pub fn new(model: &'m ProcessModel) -> Result<Self> {
        let compensator = match &model.jumps {
            JumpKernel::CompoundPoisson { law, .. } => {
                levy::truncated_mean(law, model.dimension, &model.truncation)
            }
            _ => vec![0.0; model.dimension],
        };
        if compensator.iter().any(|v| !v.is_finite()) {
            return Err(Error::Quadrature {
                estimate: f64::NAN,
                tolerance: 1e-10,
            });
        }
        Ok(Symbol {
            model,
            compensator,
            quad: Quadrature::default(),
        })
    }

    pub fn model(&self) -> &ProcessModel {
        self.model
    }

    /// `E[J χ(J)]` per unit intensity.
    pub fn compensator(&self) -> &[f64] {
        &self.compensator
    }

    pub fn with_quadrature(mut self, quad: Quadrature) -> Self {
        self.quad = quad;
        self
    }

    fn check_dims(&self, x: &[f64], xi: &[f64]) -> Result<()> {
        let n = self.model.state_dim();
        if x.len() != n || xi.len() != n {
            return Err(Error::InvalidConfig(format!(
                "state and frequency must have dimension {n}, got {} and {}",
                x.len(),
                xi.len()
            )));
        }
        Ok(())
    }

    fn continuous_part(&self, s: f64, x: &[f64], xi: &[f64]) -> Result<Complex64> {
        let k = self.model.space_time_lift;
        let mut drift = vec![0.0; self.model.state_dim()];
        self.model.drift_into(s, x, &mut drift)?;
        let lin: f64 = drift.iter().zip(xi).map(|(a, b)| a * b).sum();
        let base = &xi[k..];
        let quad = match self.model.diffusion_block(s, x)? {
            DiffusionBlock::Zero => 0.0,
            DiffusionBlock::Isotropic(q) => q * base.iter().map(|v| v * v).sum::<f64>(),
            DiffusionBlock::Full(m) => {
                let d = base.len();
                let mut acc = 0.0;
                for i in 0..d {
                    for j in 0..d {
                        acc += base[i] * m[i * d + j] * base[j];
                    }
                }
                acc
            }
        };
        Ok(Complex64::new(0.5 * quad, -lin))
    }

    /// Closed-form evaluation.
    pub fn eval(&self, s: f64, x: &[f64], xi: &[f64]) -> Result<Complex64> {
        self.check_dims(x, xi)?;
        let kernel = self.model.local_kernel(s, x)?;
        let jumps = jump_part_closed(&kernel, &xi[kernel.offset..], &self.compensator);
        let p = self.continuous_part(s, x, xi)? + jumps;
        if !(p.re.is_finite() && p.im.is_finite()) {
            return Err(Error::NonFinite {
                field: "symbol".into(),
                s,
                x: x.to_vec(),
            });
        }
        Ok(p)
    }

    /// Evaluation with the jump part obtained by quadrature.
    pub fn eval_quadrature(&self, s: f64, x: &[f64], xi: &[f64]) -> Result<Complex64> {
        self.check_dims(x, xi)?;
        let kernel = self.model.local_kernel(s, x)?;
        let jumps = jump_part_quadrature(
            &kernel,
            &xi[kernel.offset..],
            &self.model.truncation,
            &self.quad,
        )?;
        Ok(self.continuous_part(s, x, xi)? + jumps)
    }
}

/// `p(τ, x, ξ)` in closed form.
pub fn symbol_analytic(
    model: &ProcessModel,
    tau: f64,
    x: &[f64],
    xi: &[f64],
) -> Result<SymbolValue> {
    Ok(SymbolValue::analytic(Symbol::new(model)?.eval(tau, x, xi)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{catalog, JumpLaw, Truncation};

    #[test]
    fn drift_only() {
        let p = symbol_analytic(&catalog::pure_drift(vec![2.0]), 0.0, &[0.0], &[3.0]).unwrap();
        assert_eq!((p.re, p.im), (0.0, -6.0));
    }

    #[test]
    fn stable_definitional_scale() {
        let p = symbol_analytic(&catalog::alpha_stable(1, 1.5, 1.0), 0.0, &[0.0], &[2.0]).unwrap();
        assert!((p.re - 2f64.powf(1.5)).abs() < 1e-14);
    }

    #[test]
    fn two_point_at_pi() {
        let m = catalog::compound_poisson(
            1,
            1.0,
            JumpLaw::TwoPoint { size: 1.0 },
            Truncation::default(),
        );
        let p = symbol_analytic(&m, 0.0, &[0.0], &[std::f64::consts::PI]).unwrap();
        assert!((p.re - 2.0).abs() < 1e-14 && p.im == 0.0);
    }

    #[test]
    fn lift_adds_clock_frequency() {
        let m = catalog::additive_bm(1, vec![0.0, 1.0, 0.5]);
        let lifted = m.lift_space_time();
        let p = symbol_analytic(&m, 1.0, &[0.2], &[2.0]).unwrap().complex();
        let q = symbol_analytic(&lifted, 7.0, &[1.0, 0.2], &[0.5, 2.0])
            .unwrap()
            .complex();
        assert!((q - (p - Complex64::new(0.0, 0.5))).norm() < 1e-14);
    }
}
