//! Order-independent reductions and small statistical helpers shared by the
//! Monte Carlo modules.

/// Pairwise (cascade) summation. The result depends only on the slice order,
/// never on how work was scheduled.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    pairwise_sum(values) / values.len() as f64
}

/// Unbiased sample variance.
pub fn variance(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(values);
    let sq: Vec<f64> = values.iter().map(|v| (v - m) * (v - m)).collect();
    pairwise_sum(&sq) / (n - 1) as f64
}

/// Empirical quantile with linear interpolation between order statistics.
/// `sorted` must be ascending.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let w = pos - lo as f64;
    sorted[lo] * (1.0 - w) + sorted[hi] * w
}

pub fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

pub fn median(values: &[f64]) -> f64 {
    quantile_sorted(&sorted(values), 0.5)
}

/// Standard error of a binomial proportion.
pub fn binomial_std_error(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).max(0.0).sqrt()
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let a = sorted(a);
    let b = sorted(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
pub fn ks_one_sample(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let s = sorted(sample);
    let n = s.len() as f64;
    s.iter().enumerate().fold(0.0_f64, |d, (i, &x)| {
        let f = cdf(x);
        d.max((f - i as f64 / n).abs())
            .max(((i + 1) as f64 / n - f).abs())
    })
}

/// Asymptotic KS critical value at level `alpha` for effective size `n_eff`
/// (`n` for one sample, `n*m/(n+m)` for two).
pub fn ks_critical(alpha: f64, n_eff: f64) -> f64 {
    (-0.5 * (alpha / 2.0).ln()).sqrt() / n_eff.sqrt()
}

/// Ordinary least squares fit `y = a + b x`; returns `(a, b, residuals)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, Vec<f64>) {
    let mx = mean(x);
    let my = mean(y);
    let sxy: Vec<f64> = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).collect();
    let sxx: Vec<f64> = x.iter().map(|a| (a - mx) * (a - mx)).collect();
    let slope = pairwise_sum(&sxy) / pairwise_sum(&sxx);
    let intercept = my - slope * mx;
    let resid = x
        .iter()
        .zip(y)
        .map(|(a, b)| b - (intercept + slope * a))
        .collect();
    (intercept, slope, resid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let v: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&v), 500_500.0);
    }

    #[test]
    fn quantiles_interpolate() {
        let v = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(quantile_sorted(&v, 0.5), 1.5);
        assert_eq!(quantile_sorted(&v, 1.0), 3.0);
    }

    #[test]
    fn ks_identical_samples_is_zero() {
        let v = [0.3, 0.1, 0.7];
        assert_eq!(ks_two_sample(&v, &v), 0.0);
    }

    #[test]
    fn fit_recovers_line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 - 1.5 * v).collect();
        let (a, b, r) = linear_fit(&x, &y);
        assert!((a - 2.0).abs() < 1e-12 && (b + 1.5).abs() < 1e-12);
        assert!(r.iter().all(|e| e.abs() < 1e-12));
    }
}
