//! Samplers for symmetric stable laws with symbol `‖ξ‖^α`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

/// One-dimensional symmetric stable variable with `E e^{iξS} = e^{-|ξ|^α}`
/// (Chambers–Mallows–Stuck).
pub fn symmetric_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let v = PI * (rng.random::<f64>() - 0.5);
    let w: f64 = Exp1.sample(rng);
    if alpha == 1.0 {
        return v.tan();
    }
    (alpha * v).sin() / v.cos().powf(1.0 / alpha)
        * (((1.0 - alpha) * v).cos() / w).powf((1.0 - alpha) / alpha)
}

/// Positive stable variable with `E e^{-sA} = e^{-s^a}`, `0 < a < 1`
/// (Kanter's representation).
pub fn positive_stable<R: Rng + ?Sized>(a: f64, rng: &mut R) -> f64 {
    let u: f64 = loop {
        let u = rng.random::<f64>();
        if u > 0.0 {
            break u;
        }
    };
    let e: f64 = Exp1.sample(rng);
    (a * PI * u).sin() / (PI * u).sin().powf(1.0 / a)
        * (((1.0 - a) * PI * u).sin() / e).powf((1.0 - a) / a)
}

/// Rotation-invariant stable vector with `E e^{iξ'S} = e^{-‖ξ‖^α}`, written
/// into `out`. In dimension one this is [`symmetric_stable`]; otherwise a
/// Gaussian vector subordinated by a positive `α/2`-stable variance.
pub fn isotropic_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R, out: &mut [f64]) {
    if out.len() == 1 {
        out[0] = symmetric_stable(alpha, rng);
        return;
    }
    let a = positive_stable(alpha / 2.0, rng);
    let s = (2.0 * a).sqrt();
    for v in out.iter_mut() {
        let z: f64 = StandardNormal.sample(rng);
        *v = s * z;
    }
}

/// Uniform point on the unit sphere of `R^d`.
pub fn unit_direction<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    if out.len() == 1 {
        out[0] = if rng.random::<bool>() { 1.0 } else { -1.0 };
        return;
    }
    loop {
        let mut n2 = 0.0;
        for v in out.iter_mut() {
            *v = StandardNormal.sample(rng);
            n2 += *v * *v;
        }
        if n2 > 1e-300 {
            let n = n2.sqrt();
            out.iter_mut().for_each(|v| *v /= n);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::path_rng;

    fn empirical_cf(samples: &[f64], u: f64) -> f64 {
        samples.iter().map(|s| (u * s).cos()).sum::<f64>() / samples.len() as f64
    }

    #[test]
    fn one_dimensional_cf() {
        let mut rng = path_rng(11, 0);
        for alpha in [0.5, 1.0, 1.5] {
            let xs: Vec<f64> = (0..200_000)
                .map(|_| symmetric_stable(alpha, &mut rng))
                .collect();
            for u in [0.5f64, 1.0, 2.0] {
                let exact = (-u.powf(alpha)).exp();
                assert!(
                    (empirical_cf(&xs, u) - exact).abs() < 0.01,
                    "α={alpha} u={u}"
                );
            }
        }
    }

    #[test]
    fn positive_stable_laplace() {
        let mut rng = path_rng(12, 0);
        let a = 0.75;
        let xs: Vec<f64> = (0..200_000).map(|_| positive_stable(a, &mut rng)).collect();
        for s in [0.5f64, 1.0, 3.0] {
            let m = xs.iter().map(|x| (-s * x).exp()).sum::<f64>() / xs.len() as f64;
            assert!((m - (-s.powf(a)).exp()).abs() < 0.01);
        }
    }

    #[test]
    fn isotropic_in_two_dimensions() {
        let mut rng = path_rng(13, 0);
        let mut v = [0.0; 2];
        let n = 200_000;
        let (alpha, xi) = (1.2, [0.6, -0.8]);
        let mut acc = 0.0;
        for _ in 0..n {
            isotropic_stable(alpha, &mut rng, &mut v);
            acc += (xi[0] * v[0] + xi[1] * v[1]).cos();
        }
        assert!((acc / n as f64 - (-1f64).exp()).abs() < 0.01);
    }
}
