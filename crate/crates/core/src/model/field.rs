//! Coefficient fields: functions of `(s, x)` returning a fixed number of
//! real components.

use serde::{Deserialize, Serialize};

/// Unary functions available inside expression trees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Func {
    Exp,
    Ln,
    Sqrt,
    Abs,
    Sin,
    Cos,
}

/// Expression tree over the time `s` and state `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Expr {
    Const {
        value: f64,
    },
    Time,
    State {
        index: usize,
    },
    /// Euclidean norm of the state.
    Norm,
    Add {
        terms: Vec<Expr>,
    },
    Mul {
        factors: Vec<Expr>,
    },
    Neg {
        arg: Box<Expr>,
    },
    Pow {
        base: Box<Expr>,
        exponent: f64,
    },
    Max {
        args: Vec<Expr>,
    },
    Min {
        args: Vec<Expr>,
    },
    Apply {
        func: Func,
        arg: Box<Expr>,
    },
}

impl Expr {
    pub fn eval(&self, s: f64, x: &[f64]) -> f64 {
        match self {
            Expr::Const { value } => *value,
            Expr::Time => s,
            Expr::State { index } => x.get(*index).copied().unwrap_or(f64::NAN),
            Expr::Norm => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            Expr::Add { terms } => terms.iter().map(|e| e.eval(s, x)).sum(),
            Expr::Mul { factors } => factors.iter().map(|e| e.eval(s, x)).product(),
            Expr::Neg { arg } => -arg.eval(s, x),
            Expr::Pow { base, exponent } => base.eval(s, x).powf(*exponent),
            Expr::Max { args } => args
                .iter()
                .map(|e| e.eval(s, x))
                .fold(f64::NEG_INFINITY, f64::max),
            Expr::Min { args } => args
                .iter()
                .map(|e| e.eval(s, x))
                .fold(f64::INFINITY, f64::min),
            Expr::Apply { func, arg } => {
                let v = arg.eval(s, x);
                match func {
                    Func::Exp => v.exp(),
                    Func::Ln => v.ln(),
                    Func::Sqrt => v.sqrt(),
                    Func::Abs => v.abs(),
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                }
            }
        }
    }

    fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Const { .. } | Expr::Time | Expr::State { .. } | Expr::Norm => vec![],
            Expr::Add { terms: v }
            | Expr::Mul { factors: v }
            | Expr::Max { args: v }
            | Expr::Min { args: v } => v.iter().collect(),
            Expr::Neg { arg } | Expr::Apply { arg, .. } => vec![arg],
            Expr::Pow { base, .. } => vec![base],
        }
    }

    fn any(&self, pred: &dyn Fn(&Expr) -> bool) -> bool {
        pred(self) || self.children().into_iter().any(|c| c.any(pred))
    }

    pub fn uses_state(&self) -> bool {
        self.any(&|e| matches!(e, Expr::State { .. } | Expr::Norm))
    }

    pub fn uses_time(&self) -> bool {
        self.any(&|e| matches!(e, Expr::Time))
    }

    pub fn max_state_index(&self) -> Option<usize> {
        let mut best = None;
        fn walk(e: &Expr, best: &mut Option<usize>) {
            if let Expr::State { index } = e {
                *best = Some(best.map_or(*index, |b: usize| b.max(*index)));
            }
            for c in e.children() {
                walk(c, best);
            }
        }
        walk(self, &mut best);
        best
    }
}

/// A coefficient `(s, x) -> R^m`. Matrices are stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CoefficientField {
    Constant {
        values: Vec<f64>,
    },
    /// One polynomial in `s` per component, coefficients in increasing degree.
    TimePolynomial {
        coefficients: Vec<Vec<f64>>,
    },
    /// Multilinear interpolation on a rectilinear grid over `s` and
    /// optionally every state coordinate. `values` is indexed with the time
    /// axis varying slowest.
    TabulatedGrid {
        time: Vec<f64>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        space: Vec<Vec<f64>>,
        values: Vec<Vec<f64>>,
    },
    Expression {
        components: Vec<Expr>,
    },
}

/// Marker for an evaluation outside a tabulated domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutsideGrid;

impl CoefficientField {
    pub fn constant(values: Vec<f64>) -> Self {
        CoefficientField::Constant { values }
    }

    pub fn scalar(value: f64) -> Self {
        CoefficientField::Constant {
            values: vec![value],
        }
    }

    pub fn components(&self) -> usize {
        match self {
            CoefficientField::Constant { values } => values.len(),
            CoefficientField::TimePolynomial { coefficients } => coefficients.len(),
            CoefficientField::TabulatedGrid { values, .. } => values.first().map_or(0, Vec::len),
            CoefficientField::Expression { components } => components.len(),
        }
    }

    pub fn depends_on_state(&self) -> bool {
        match self {
            CoefficientField::Constant { .. } | CoefficientField::TimePolynomial { .. } => false,
            CoefficientField::TabulatedGrid { space, .. } => !space.is_empty(),
            CoefficientField::Expression { components } => components.iter().any(Expr::uses_state),
        }
    }

    pub fn depends_on_time(&self) -> bool {
        match self {
            CoefficientField::Constant { .. } => false,
            CoefficientField::TimePolynomial { coefficients } => {
                coefficients.iter().any(|c| c.len() > 1)
            }
            CoefficientField::TabulatedGrid { .. } => true,
            CoefficientField::Expression { components } => components.iter().any(Expr::uses_time),
        }
    }

    /// True when every evaluation is exactly zero.
    pub fn is_zero(&self) -> bool {
        match self {
            CoefficientField::Constant { values } => values.iter().all(|v| *v == 0.0),
            CoefficientField::TimePolynomial { coefficients } => {
                coefficients.iter().flatten().all(|v| *v == 0.0)
            }
            CoefficientField::TabulatedGrid { values, .. } => {
                values.iter().flatten().all(|v| *v == 0.0)
            }
            CoefficientField::Expression { .. } => false,
        }
    }

    /// Structural problems, reported as `(relative key path, message)`.
    pub fn check(&self, state_dim: usize) -> Result<(), (String, String)> {
        match self {
            CoefficientField::Constant { values } => {
                if values.is_empty() {
                    return Err(("values".into(), "must not be empty".into()));
                }
            }
            CoefficientField::TimePolynomial { coefficients } => {
                if coefficients.is_empty() {
                    return Err(("coefficients".into(), "must not be empty".into()));
                }
            }
            CoefficientField::TabulatedGrid {
                time,
                space,
                values,
            } => {
                let axes: Vec<(&str, &Vec<f64>)> = std::iter::once(("time", time))
                    .chain(space.iter().map(|a| ("space", a)))
                    .collect();
                if !space.is_empty() && space.len() != state_dim {
                    return Err((
                        "space".into(),
                        format!("expected {state_dim} state axes, found {}", space.len()),
                    ));
                }
                for (name, axis) in &axes {
                    if axis.len() < 2 || axis.windows(2).any(|w| !(w[0] < w[1])) {
                        return Err((
                            (*name).into(),
                            "axes need at least two strictly increasing points".into(),
                        ));
                    }
                }
                let nodes: usize = axes.iter().map(|(_, a)| a.len()).product();
                if values.len() != nodes {
                    return Err((
                        "values".into(),
                        format!("expected {nodes} grid nodes, found {}", values.len()),
                    ));
                }
                let m = values[0].len();
                if m == 0 || values.iter().any(|v| v.len() != m) {
                    return Err((
                        "values".into(),
                        "every node needs the same non-zero component count".into(),
                    ));
                }
            }
            CoefficientField::Expression { components } => {
                if components.is_empty() {
                    return Err(("components".into(), "must not be empty".into()));
                }
                if let Some(i) = components.iter().filter_map(Expr::max_state_index).max() {
                    if i >= state_dim {
                        return Err((
                            "components".into(),
                            format!("state index {i} out of range for dimension {state_dim}"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Evaluates into `out`, which must have `components()` entries.
    pub fn eval_into(&self, s: f64, x: &[f64], out: &mut [f64]) -> Result<(), OutsideGrid> {
        match self {
            CoefficientField::Constant { values } => out.copy_from_slice(values),
            CoefficientField::TimePolynomial { coefficients } => {
                for (o, c) in out.iter_mut().zip(coefficients) {
                    *o = c.iter().rev().fold(0.0, |acc, a| acc * s + a);
                }
            }
            CoefficientField::TabulatedGrid {
                time,
                space,
                values,
            } => {
                interpolate(time, space, values, s, x, out)?;
            }
            CoefficientField::Expression { components } => {
                for (o, e) in out.iter_mut().zip(components) {
                    *o = e.eval(s, x);
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, s: f64, x: &[f64]) -> Result<Vec<f64>, OutsideGrid> {
        let mut out = vec![0.0; self.components()];
        self.eval_into(s, x, &mut out)?;
        Ok(out)
    }

    pub fn eval_scalar(&self, s: f64, x: &[f64]) -> Result<f64, OutsideGrid> {
        let mut out = [0.0];
        self.eval_into(s, x, &mut out)?;
        Ok(out[0])
    }

    /// The right derivative in time of a time polynomial, if this is one.
    pub fn polynomial_derivative(coefficients: &[f64]) -> Vec<f64> {
        let d: Vec<f64> = coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| k as f64 * c)
            .collect();
        if d.is_empty() {
            vec![0.0]
        } else {
            d
        }
    }
}

fn locate(axis: &[f64], v: f64) -> Result<(usize, f64), OutsideGrid> {
    let n = axis.len();
    if !(v >= axis[0] && v <= axis[n - 1]) {
        return Err(OutsideGrid);
    }
    let i = axis.partition_point(|a| *a <= v).clamp(1, n - 1) - 1;
    let w = (v - axis[i]) / (axis[i + 1] - axis[i]);
    Ok((i, w))
}

fn interpolate(
    time: &[f64],
    space: &[Vec<f64>],
    values: &[Vec<f64>],
    s: f64,
    x: &[f64],
    out: &mut [f64],
) -> Result<(), OutsideGrid> {
    let mut cells = Vec::with_capacity(1 + space.len());
    cells.push(locate(time, s)?);
    for (axis, v) in space.iter().zip(x) {
        cells.push(locate(axis, *v)?);
    }
    let lens: Vec<usize> = std::iter::once(time.len())
        .chain(space.iter().map(Vec::len))
        .collect();
    out.iter_mut().for_each(|o| *o = 0.0);
    for corner in 0..(1usize << cells.len()) {
        let mut weight = 1.0;
        let mut flat = 0;
        for (axis, &(i, w)) in cells.iter().enumerate() {
            let upper = corner >> axis & 1 == 1;
            weight *= if upper { w } else { 1.0 - w };
            flat = flat * lens[axis] + i + usize::from(upper);
        }
        if weight != 0.0 {
            for (o, v) in out.iter_mut().zip(&values[flat]) {
                *o += weight * v;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_horner() {
        let f = CoefficientField::TimePolynomial {
            coefficients: vec![vec![1.0, 0.0, 2.0]],
        };
        assert_eq!(f.eval_scalar(3.0, &[]).unwrap(), 19.0);
    }

    #[test]
    fn bilinear_grid_reproduces_affine_function() {
        // v(s, x) = 1 + 2 s - x
        let time = vec![0.0, 1.0, 3.0];
        let space = vec![vec![-1.0, 0.5, 2.0]];
        let mut values = vec![];
        for s in &time {
            for x in &space[0] {
                values.push(vec![1.0 + 2.0 * s - x]);
            }
        }
        let f = CoefficientField::TabulatedGrid {
            time,
            space,
            values,
        };
        f.check(1).unwrap();
        let v = f.eval_scalar(2.2, &[1.3]).unwrap();
        assert!((v - (1.0 + 4.4 - 1.3)).abs() < 1e-12);
        assert_eq!(f.eval_scalar(3.5, &[0.0]), Err(OutsideGrid));
        assert_eq!(f.eval_scalar(1.0, &[-1.5]), Err(OutsideGrid));
    }

    #[test]
    fn expression_norm_and_state_detection() {
        let e = Expr::Add {
            terms: vec![Expr::Const { value: 1.0 }, Expr::Norm],
        };
        assert_eq!(e.eval(0.0, &[3.0, 4.0]), 6.0);
        assert!(e.uses_state());
        assert!(!e.uses_time());
    }
}
