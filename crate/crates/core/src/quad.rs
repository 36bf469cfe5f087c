//! Adaptive Gauss-Kronrod quadrature.
//!
//! Global adaptive bisection on a 7/15-point Gauss-Kronrod pair, with an
//! oscillatory-tail driver that integrates half-period chunks and
//! accelerates the alternating partial sums with Wynn's epsilon algorithm.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, rhs: Self) -> Self {
        Estimate {
            value: self.value + rhs.value,
            error: self.error + rhs.error,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// Roundoff level of `error`.
    floor: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One 15-point Kronrod evaluation on `[a, b]`.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Estimate {
    kronrod_with_floor(f, a, b).0
}

/// Kronrod estimate together with the roundoff floor of its error.
fn kronrod_with_floor<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (Estimate, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let err = (kronrod - gauss) * half;
    let habs = half.abs();
    (
        Estimate {
            value: kronrod * half,
            error: rescale_error(err, abs * habs, asc * habs),
        },
        50.0 * f64::EPSILON * abs * habs,
    )
}

impl Quadrature {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        Quadrature {
            abs_tol,
            ..Default::default()
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<Estimate> {
        self.integrate_breaks(f, &[a, b])
    }

    /// Integrates over `[points[0], points[last]]`, never bisecting across a
    /// supplied breakpoint. Points must be ascending.
    pub fn integrate_breaks<F: Fn(f64) -> f64>(&self, f: F, points: &[f64]) -> Result<Estimate> {
        debug_assert!(points.windows(2).all(|w| w[0] <= w[1]));
        let mut heap = BinaryHeap::new();
        let mut total = Estimate {
            value: 0.0,
            error: 0.0,
        };
        let mut floor = 0.0;
        for w in points.windows(2) {
            if w[1] > w[0] {
                let (e, fl) = kronrod_with_floor(&f, w[0], w[1]);
                total = total + e;
                floor += fl;
                heap.push(Segment {
                    a: w[0],
                    b: w[1],
                    value: e.value,
                    error: e.error,
                    floor: fl,
                });
            }
        }
        let mut count = heap.len();
        loop {
            let tol = self.abs_tol.max(self.rel_tol * total.value.abs());
            // below twice the roundoff floor bisection cannot help
            if total.error <= tol || total.error <= 2.0 * floor {
                return Ok(total);
            }
            if count >= self.max_intervals {
                return Err(Error::Quadrature {
                    estimate: total.error,
                    tolerance: tol,
                });
            }
            let Some(worst) = heap.pop() else {
                return Ok(total);
            };
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                // interval exhausted at machine precision; accept what we have
                return if total.error <= 1e3 * tol {
                    Ok(total)
                } else {
                    Err(Error::Quadrature {
                        estimate: total.error,
                        tolerance: tol,
                    })
                };
            }
            let (left, lf) = kronrod_with_floor(&f, worst.a, mid);
            let (right, rf) = kronrod_with_floor(&f, mid, worst.b);
            total.value += left.value + right.value - worst.value;
            total.error += left.error + right.error - worst.error;
            floor += lf + rf - worst.floor;
            for (lo, hi, e, fl) in [(worst.a, mid, left, lf), (mid, worst.b, right, rf)] {
                heap.push(Segment {
                    a: lo,
                    b: hi,
                    value: e.value,
                    error: e.error,
                    floor: fl,
                });
            }
            count += 1;
            // recompute from the heap now and then to stop error drift
            if count % 256 == 0 {
                floor = heap.iter().map(|s| s.floor).sum();
                total = heap.iter().fold(
                    Estimate {
                        value: 0.0,
                        error: 0.0,
                    },
                    |acc, s| {
                        acc + Estimate {
                            value: s.value,
                            error: s.error,
                        }
                    },
                );
            }
        }
    }

    /// Integrates an oscillating integrand over `[start, ∞)` by chunks of
    /// length `half_period`, where consecutive chunk integrals alternate in
    /// sign. `start` should sit on a zero of the oscillation.
    pub fn integrate_oscillatory_tail<F: Fn(f64) -> f64>(
        &self,
        f: F,
        start: f64,
        half_period: f64,
    ) -> Result<Estimate> {
        const MAX_CHUNKS: usize = 400;
        let chunk_rule = Quadrature {
            abs_tol: self.abs_tol * 1e-3,
            rel_tol: 1e-14,
            max_intervals: self.max_intervals,
        };
        let mut partial = Vec::with_capacity(MAX_CHUNKS);
        let mut sum = 0.0;
        let mut chunk_err = 0.0;
        let mut prev: Option<f64> = None;
        let mut stable_hits = 0;
        for k in 0..MAX_CHUNKS {
            let a = start + k as f64 * half_period;
            let e = chunk_rule.integrate(&f, a, a + half_period)?;
            sum += e.value;
            chunk_err += e.error;
            partial.push(sum);
            if partial.len() >= 6 {
                let tail = &partial[partial.len().saturating_sub(24)..];
                let acc = wynn_epsilon(tail);
                if let Some(p) = prev {
                    let diff = (acc - p).abs();
                    if diff <= 0.1 * self.abs_tol.max(self.rel_tol * acc.abs()) {
                        stable_hits += 1;
                        if stable_hits >= 2 {
                            return Ok(Estimate {
                                value: acc,
                                error: diff + chunk_err,
                            });
                        }
                    } else {
                        stable_hits = 0;
                    }
                }
                prev = Some(acc);
            }
        }
        let acc = wynn_epsilon(&partial[partial.len() - 24..]);
        let diff = (acc - prev.unwrap_or(acc)).abs();
        let tol = self.abs_tol.max(self.rel_tol * acc.abs());
        if diff + chunk_err <= tol {
            Ok(Estimate {
                value: acc,
                error: diff + chunk_err,
            })
        } else {
            Err(Error::Quadrature {
                estimate: diff + chunk_err,
                tolerance: tol,
            })
        }
    }
}

/// Wynn's epsilon algorithm: the deepest even-column entry of the table
/// built from the partial sums.
pub fn wynn_epsilon(sums: &[f64]) -> f64 {
    let n = sums.len();
    if n < 3 {
        return *sums.last().unwrap_or(&0.0);
    }
    // prev2 = column k-1, prev = column k
    let mut prev2 = vec![0.0; n + 1];
    let mut prev = sums.to_vec();
    let mut best = sums[n - 1];
    let mut k = 0;
    while prev.len() > 1 {
        let mut next = Vec::with_capacity(prev.len() - 1);
        for i in 0..prev.len() - 1 {
            let d = prev[i + 1] - prev[i];
            if d == 0.0 {
                // exact convergence in this column
                return if k % 2 == 0 { prev[i + 1] } else { best };
            }
            next.push(prev2[i + 1] + 1.0 / d);
        }
        k += 1;
        prev2 = prev;
        prev = next;
        if k % 2 == 0 {
            if let Some(&v) = prev.last() {
                if v.is_finite() {
                    best = v;
                }
            }
        }
    }
    best
}
