//! Symbols of additive processes from right derivatives of their
//! characteristics.

use num_complex::Complex64;

use super::SymbolValue;
use crate::error::{Error, Result};

const REL_TOL: f64 = 1e-7;
const ABS_FLOOR: f64 = 1e-12;
const FIRST_LEVEL: i32 = 3;
const LAST_LEVEL: i32 = 32;
const COLUMNS: usize = 6;

/// Right derivative of `f` at `at` from the difference quotients with steps
/// `2^{-k}`, accelerated by Richardson extrapolation in the step.
pub fn right_derivative(f: impl Fn(f64) -> Complex64, at: f64) -> Result<Complex64> {
    let f0 = f(at);
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    let mut last_diff = f64::INFINITY;
    let mut hits = 0;
    for k in FIRST_LEVEL..=LAST_LEVEL {
        let h = 2f64.powi(-k);
        let quotient = (f(at + h) - f0) / h;
        let mut row = vec![quotient];
        if let Some(prev) = rows.last() {
            for j in 1..COLUMNS.min(prev.len() + 1) {
                let factor = 2f64.powi(j as i32) - 1.0;
                let v = row[j - 1] + (row[j - 1] - prev[j - 1]) / factor;
                row.push(v);
            }
            let best = *row.last().unwrap();
            let prev_best = *prev.last().unwrap();
            let diff = (best - prev_best).norm();
            last_diff = diff;
            if diff <= REL_TOL * best.norm() + ABS_FLOOR {
                hits += 1;
                if hits >= 2 {
                    return Ok(best);
                }
            } else {
                hits = 0;
            }
        }
        rows.push(row);
    }
    Err(Error::RightDerivative {
        at,
        difference: last_diff,
    })
}

/// Characteristics of an additive process as functions of time: drift
/// `B_t`, covariance `C_t` (row-major) and the jump transform
/// `t ↦ ∫ (e^{iy'ξ} - 1 - iy'ξ χ(y)) ν((0,t], dy)` at the frequency in use.
pub struct AdditiveCharacteristics<'a> {
    pub drift: &'a dyn Fn(f64) -> Vec<f64>,
    pub covariance: &'a dyn Fn(f64) -> Vec<f64>,
    pub jumps: &'a dyn Fn(f64, &[f64]) -> Complex64,
}

/// Symbol `-∂₊(iξ'B − ½ξ'Cξ + ν-transform)(τ)`, matching the sign of
/// [`super::symbol_analytic`].
pub fn symbol_additive(
    ch: &AdditiveCharacteristics<'_>,
    tau: f64,
    xi: &[f64],
) -> Result<SymbolValue> {
    let d = xi.len();
    let exponent = |t: f64| {
        let b = (ch.drift)(t);
        let c = (ch.covariance)(t);
        let lin: f64 = b.iter().zip(xi).map(|(a, x)| a * x).sum();
        let mut quad = 0.0;
        for i in 0..d {
            for j in 0..d {
                quad += xi[i] * c[i * d + j] * xi[j];
            }
        }
        Complex64::new(-0.5 * quad, lin) + (ch.jumps)(t, xi)
    };
    let derivative = right_derivative(exponent, tau)?;
    Ok(SymbolValue::analytic(-derivative))
}

/// Symbol of Brownian motion with variance polynomial `σ²(t)` via
/// [`symbol_additive`].
pub fn additive_bm_symbol(variance: &[f64], tau: f64, xi: &[f64]) -> Result<SymbolValue> {
    let d = xi.len();
    let sigma2 = |t: f64| variance.iter().rev().fold(0.0, |acc, a| acc * t + a);
    let drift = move |_: f64| vec![0.0; d];
    let covariance = move |t: f64| {
        let v = sigma2(t) - sigma2(0.0);
        let mut c = vec![0.0; d * d];
        for i in 0..d {
            c[i * d + i] = v;
        }
        c
    };
    let jumps = |_: f64, _: &[f64]| Complex64::new(0.0, 0.0);
    symbol_additive(
        &AdditiveCharacteristics {
            drift: &drift,
            covariance: &covariance,
            jumps: &jumps,
        },
        tau,
        xi,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variance_t_squared() {
        let p = additive_bm_symbol(&[0.0, 0.0, 1.0], 1.5, &[2.0]).unwrap();
        assert!((p.re - 6.0).abs() < 1e-9 && p.im.abs() < 1e-12);
    }

    #[test]
    fn unit_slope() {
        for tau in [0.0, 0.3, 4.0] {
            let p = additive_bm_symbol(&[0.0, 1.0], tau, &[1.0]).unwrap();
            assert!((p.re - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn kink_uses_right_slope() {
        let tau = 0.8;
        let drift = move |t: f64| vec![(t - tau).max(0.0)];
        let covariance = |_: f64| vec![0.0];
        let jumps = |_: f64, _: &[f64]| Complex64::new(0.0, 0.0);
        let ch = AdditiveCharacteristics {
            drift: &drift,
            covariance: &covariance,
            jumps: &jumps,
        };
        let p = symbol_additive(&ch, tau, &[1.0]).unwrap();
        assert!((p.im + 1.0).abs() < 1e-12 && p.re.abs() < 1e-12);
    }

    #[test]
    fn square_root_has_no_right_derivative() {
        let r = right_derivative(|t| Complex64::new(t.max(0.0).sqrt(), 0.0), 0.0);
        assert!(matches!(r, Err(Error::RightDerivative { .. })));
    }
}
