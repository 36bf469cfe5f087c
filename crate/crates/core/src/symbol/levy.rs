//! Jump part of the symbol, `-∫ (e^{iy'ξ} - 1 - iy'ξ χ(y)) N(dy)`, in
//! closed form and by quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::kernel::{sphere_area, stable_density_constant};
use crate::model::{JumpLaw, LocalJumps, LocalKernel, Truncation};
use crate::quad::Quadrature;

/// `E[J χ(J)]` for a `dim`-dimensional jump; zero for symmetric laws.
pub fn truncated_mean(law: &JumpLaw, dim: usize, truncation: &Truncation) -> Vec<f64> {
    if law.is_symmetric() || truncation.shape == crate::model::TruncationShape::Zero {
        return vec![0.0; dim];
    }
    (0..dim)
        .map(|k| law.expectation(dim, &|y| y[k] * truncation.eval(y)))
        .collect()
}

/// Closed form of the jump part. `compensator` is `E[J χ(J)]`.
pub fn jump_part_closed(kernel: &LocalKernel, xi: &[f64], compensator: &[f64]) -> Complex64 {
    match kernel.jumps {
        LocalJumps::None => Complex64::new(0.0, 0.0),
        LocalJumps::CompoundPoisson { intensity, law } => {
            let phi = xi
                .iter()
                .fold(Complex64::new(1.0, 0.0), |acc, &u| acc * law.cf(u));
            let drift: f64 = xi.iter().zip(compensator).map(|(a, b)| a * b).sum();
            intensity * (Complex64::new(1.0, 0.0) - phi) + Complex64::new(0.0, intensity * drift)
        }
        LocalJumps::Stable { alpha, scale } => {
            let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
            Complex64::new(scale.powf(alpha) * norm.powf(alpha), 0.0)
        }
    }
}

/// `∫_0^∞ (1 - cos(y u)) y^{-1-α} dy` by quadrature.
///
/// Near zero the `O(y²)` factor is pulled out and `y = v^{1/(2-α)}` removes
/// the remaining power singularity; beyond the first zero of `cos(yu)` the
/// oscillating part is integrated by half periods with epsilon acceleration.
pub fn stable_radial_integral(alpha: f64, u: f64, quad: &Quadrature) -> Result<f64> {
    let u = u.abs();
    if u == 0.0 {
        return Ok(0.0);
    }
    let y0 = PI / (2.0 * u);
    let p = 2.0 - alpha;
    let near_integrand = |v: f64| {
        let y = v.powf(1.0 / p);
        if y == 0.0 {
            return u * u / (2.0 * p);
        }
        let s = (0.5 * y * u).sin();
        2.0 * s * s / (y * y * p)
    };
    let near = quad.integrate(near_integrand, 0.0, y0.powf(p))?;
    let tail =
        quad.integrate_oscillatory_tail(|y: f64| (y * u).cos() * y.powf(-1.0 - alpha), y0, PI / u)?;
    Ok(near.value + y0.powf(-alpha) / alpha - tail.value)
}

fn scaled_quadrature(base: &Quadrature, scale: f64) -> Quadrature {
    Quadrature {
        abs_tol: base.abs_tol.min(1e-12 * scale.max(1e-300)),
        rel_tol: base.rel_tol.max(1e-10),
        ..*base
    }
}

/// Stable jump part `γ^α ∫ (1 - cos(y'ξ)) C ‖y‖^{-d-α} dy` by quadrature,
/// reduced to radial and polar-angle integrals.
fn stable_quadrature(alpha: f64, scale: f64, xi: &[f64], quad: &Quadrature) -> Result<f64> {
    let d = xi.len();
    let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 || scale == 0.0 {
        return Ok(0.0);
    }
    let c = stable_density_constant(alpha, d) * scale.powf(alpha);
    if d == 1 {
        let inner = scaled_quadrature(quad, norm.powf(alpha));
        return Ok(2.0 * c * stable_radial_integral(alpha, norm, &inner)?);
    }
    // ∫_{S^{d-1}} g(θ·ê) dθ = |S^{d-2}| ∫_0^π g(cos φ) sin^{d-2} φ dφ, and the
    // radial integral at frequency u equals |u|^α times its value at 1
    let radial = stable_radial_integral(alpha, 1.0, quad)?;
    let outer = Quadrature {
        abs_tol: 1e-13,
        rel_tol: 1e-11,
        max_intervals: quad.max_intervals,
    };
    let angular = |phi: f64| phi.cos().abs().powf(alpha) * phi.sin().powi(d as i32 - 2);
    let total = outer.integrate_breaks(angular, &[0.0, PI / 2.0, PI])?;
    Ok(c * sphere_area(d - 1) * norm.powf(alpha) * radial * total.value)
}

/// Jump part of one coordinate law at frequency `u` by quadrature:
/// `-∫ (e^{iyu} - 1 - iyu χ(y)) F(dy)` in one dimension.
fn compound_poisson_1d(
    law: &JumpLaw,
    u: f64,
    truncation: &Truncation,
    quad: &Quadrature,
) -> Result<Complex64> {
    let integrand = |y: f64| -> (f64, f64) {
        let chi = truncation.radial(y.abs());
        ((y * u).cos() - 1.0, (y * u).sin() - y * u * chi)
    };
    if let JumpLaw::TwoPoint { size } = *law {
        let (a, b) = integrand(size);
        let (c, d) = integrand(-size);
        return Ok(-Complex64::new(0.5 * (a + c), 0.5 * (b + d)));
    }
    let breaks = oscillation_breaks(law, u, truncation);
    let re = quad.integrate_breaks(|y| integrand(y).0 * law.density(y).unwrap_or(0.0), &breaks)?;
    let im = quad.integrate_breaks(|y| integrand(y).1 * law.density(y).unwrap_or(0.0), &breaks)?;
    Ok(-Complex64::new(re.value, im.value))
}

/// Characteristic function of one coordinate by quadrature.
fn cf_1d(law: &JumpLaw, u: f64, quad: &Quadrature) -> Result<Complex64> {
    if let JumpLaw::TwoPoint { size } = *law {
        return Ok(Complex64::new((size * u).cos(), 0.0));
    }
    let breaks = oscillation_breaks(law, u, &Truncation::zero());
    let re = quad.integrate_breaks(|y| (y * u).cos() * law.density(y).unwrap_or(0.0), &breaks)?;
    let im = quad.integrate_breaks(|y| (y * u).sin() * law.density(y).unwrap_or(0.0), &breaks)?;
    Ok(Complex64::new(re.value, im.value))
}

/// Support of the law split at the kinks of χ and at half periods of the
/// oscillation, capped at a few thousand pieces.
fn oscillation_breaks(law: &JumpLaw, u: f64, truncation: &Truncation) -> Vec<f64> {
    let support = law.support_breaks();
    let (lo, hi) = (support[0], support[support.len() - 1]);
    let mut pts = support.clone();
    if truncation.shape != crate::model::TruncationShape::Zero {
        for r in [truncation.inner_radius, truncation.support_radius()] {
            pts.extend([-r, r]);
        }
    }
    if u != 0.0 {
        let half = PI / u.abs();
        let count = ((hi - lo) / half).ceil();
        if count <= 4000.0 {
            let start = (lo / half).floor() as i64;
            let end = (hi / half).ceil() as i64;
            pts.extend((start..=end).map(|k| k as f64 * half));
        }
    }
    pts.retain(|p| *p >= lo && *p <= hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Jump part `-∫ (e^{iy'ξ} - 1 - iy'ξ χ(y)) N(dy)` of the symbol computed
/// by quadrature only, without closed-form characteristic functions.
pub fn jump_part_quadrature(
    kernel: &LocalKernel,
    xi: &[f64],
    truncation: &Truncation,
    quad: &Quadrature,
) -> Result<Complex64> {
    match kernel.jumps {
        LocalJumps::None => Ok(Complex64::new(0.0, 0.0)),
        LocalJumps::Stable { alpha, scale } => Ok(Complex64::new(
            stable_quadrature(alpha, scale, xi, quad)?,
            0.0,
        )),
        LocalJumps::CompoundPoisson { intensity, law } => {
            if xi.len() == 1 {
                return Ok(intensity * compound_poisson_1d(&law, xi[0], truncation, quad)?);
            }
            let mut phi = Complex64::new(1.0, 0.0);
            for &u in xi {
                phi *= cf_1d(&law, u, quad)?;
            }
            let m = truncated_mean(&law, xi.len(), truncation);
            if m.iter().any(|v| !v.is_finite()) {
                return Err(Error::Quadrature {
                    estimate: f64::NAN,
                    tolerance: quad.abs_tol,
                });
            }
            let drift: f64 = xi.iter().zip(&m).map(|(a, b)| a * b).sum();
            Ok(intensity * (Complex64::new(1.0 - phi.re, -phi.im) + Complex64::new(0.0, drift)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel(jumps: LocalJumps, dim: usize) -> LocalKernel {
        LocalKernel {
            offset: 0,
            dim,
            jumps,
        }
    }

    #[test]
    fn stable_radial_matches_homogeneity() {
        let q = Quadrature::default();
        for alpha in [0.5, 1.0, 1.5] {
            let c = stable_density_constant(alpha, 1);
            for u in [0.3, 1.0, 7.0] {
                let v = 2.0 * c * stable_radial_integral(alpha, u, &q).unwrap();
                let exact = u.powf(alpha);
                assert!(
                    (v - exact).abs() <= 1e-8 * exact,
                    "α={alpha} u={u}: {v} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn stable_quadrature_in_two_and_three_dimensions() {
        let q = Quadrature::default();
        for d in [2usize, 3] {
            let xi: Vec<f64> = (0..d).map(|k| 0.5 + k as f64).collect();
            let k = kernel(
                LocalJumps::Stable {
                    alpha: 1.2,
                    scale: 0.8,
                },
                d,
            );
            let v = jump_part_quadrature(&k, &xi, &Truncation::default(), &q).unwrap();
            let exact = jump_part_closed(&k, &xi, &vec![0.0; d]);
            assert!(
                (v - exact).norm() <= 1e-6 * exact.norm(),
                "d={d}: {v} vs {exact}"
            );
        }
    }

    #[test]
    fn gaussian_jumps_without_truncation() {
        let k = kernel(
            LocalJumps::CompoundPoisson {
                intensity: 1.0,
                law: JumpLaw::Gaussian {
                    mean: 0.0,
                    std: 1.0,
                },
            },
            1,
        );
        let v =
            jump_part_quadrature(&k, &[1.0], &Truncation::zero(), &Quadrature::default()).unwrap();
        assert!((v.re - (1.0 - (-0.5f64).exp())).abs() < 1e-10);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn shifted_gaussian_uses_compensator() {
        let law = JumpLaw::Gaussian {
            mean: 0.7,
            std: 0.4,
        };
        let t = Truncation::default();
        let k = kernel(
            LocalJumps::CompoundPoisson {
                intensity: 1.5,
                law,
            },
            1,
        );
        let m = truncated_mean(&law, 1, &t);
        let q = Quadrature::default();
        for u in [-3.0, 0.4, 2.5] {
            let a = jump_part_quadrature(&k, &[u], &t, &q).unwrap();
            let b = jump_part_closed(&k, &[u], &m);
            assert!((a - b).norm() < 1e-9, "{a} vs {b}");
        }
    }
}
