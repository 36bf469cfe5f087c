//! Plot-ready tables projected from reports.
//!
//! | report | files | columns |
//! |---|---|---|
//! | symbol-sweep | `symbols` | `tau, xi_1.., re, im[, quad_re, quad_im]` |
//! | estimate-sweep | `estimates` | `tau, xi_1.., re, im, radius, exact_re, exact_im, bias_budget, low_precision` |
//! | indices | `indices` | `point, tau, beta, beta_under, delta_bar, delta` (point 0 is the start, `tau` NaN) |
//! | indices | `h_curves` | `point, tau, curve, radius, value, log_radius, log_value` |
//! | indices | `fit_windows` | `point, tau, curve, window_radius, exponent` |
//! | inequality | `cells` | `t, radius, lhs, lhs_radius, functional, rhs, constant, margin, pass, cell_constant` |
//! | scaling | `quantiles` | `lambda, t, q10, q50, q90, verdict` |
//! | p-variation | `pvariation` | `p, level, sum, running_max, verdict` |
//! | exp-moment | `expmoment` | `t, xi_1.., exponent_bound, bound, mean, std_error, pass` |

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::SymbolEstimate;
use crate::indices::{Curve, IndexReport, IndexSet};
use crate::symbol::SymbolValue;
use crate::verify::{ExpMomentReport, InequalityReport, PVariationReport, ScalingReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolRow {
    pub tau: f64,
    pub frequency: Vec<f64>,
    pub value: SymbolValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<SymbolValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub tau: f64,
    pub estimate: SymbolEstimate,
    pub exact: SymbolValue,
}

/// Summary document written as `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "report", rename_all = "kebab-case")]
pub enum Report {
    SymbolSweep {
        model_hash: String,
        rows: Vec<SymbolRow>,
    },
    EstimateSweep {
        model_hash: String,
        seed: u64,
        paths: usize,
        rows: Vec<EstimateRow>,
    },
    Indices {
        model_hash: String,
        indices: IndexReport,
    },
    Inequality(InequalityReport),
    Scaling {
        reports: Vec<ScalingReport>,
    },
    PVariation {
        flip: Option<f64>,
        reports: Vec<PVariationReport>,
    },
    ExpMoment(ExpMomentReport),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    JsonLines,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::JsonLines => "jsonl",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl Cell {
    pub fn text(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Num(v) => {
                serde_json::Number::from_f64(*v).map_or(serde_json::Value::Null, Into::into)
            }
            Cell::Int(v) => (*v).into(),
            Cell::Text(s) => s.clone().into(),
            Cell::Bool(b) => (*b).into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(name: &str, headers: &[&str]) -> Self {
        Table {
            name: name.into(),
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn write(&self, dir: &Path, format: Format) -> Result<PathBuf> {
        let path = dir.join(format!("{}.{}", self.name, format.extension()));
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_path(&path)?;
                w.write_record(&self.headers)?;
                for r in &self.rows {
                    w.write_record(r.iter().map(Cell::text))?;
                }
                w.flush()?;
            }
            Format::JsonLines => {
                let mut w = BufWriter::new(File::create(&path)?);
                for r in &self.rows {
                    let obj: serde_json::Map<String, serde_json::Value> = self
                        .headers
                        .iter()
                        .cloned()
                        .zip(r.iter().map(Cell::json))
                        .collect();
                    serde_json::to_writer(&mut w, &obj).map_err(|e| Error::Io(e.into()))?;
                    w.write_all(b"\n")?;
                }
                w.flush()?;
            }
        }
        Ok(path)
    }
}

fn xi_headers(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("xi_{i}")).collect()
}

fn with_xi(name: &str, lead: &[&str], dim: usize, tail: &[&str]) -> Table {
    let mut t = Table::new(name, lead);
    t.headers.extend(xi_headers(dim));
    t.headers.extend(tail.iter().map(|s| s.to_string()));
    t
}

fn curve_rows(h: &mut Table, w: &mut Table, point: u64, tau: f64, curves: &[Curve]) {
    for c in curves {
        for (r, v) in c.radii.iter().zip(&c.values) {
            h.rows.push(vec![
                Cell::Int(point),
                Cell::Num(tau),
                Cell::Text(c.name.clone()),
                Cell::Num(*r),
                Cell::Num(*v),
                Cell::Num(r.ln()),
                Cell::Num(v.ln()),
            ]);
        }
        for (r, e) in c.fit.window_radii.iter().zip(&c.fit.window_exponents) {
            w.rows.push(vec![
                Cell::Int(point),
                Cell::Num(tau),
                Cell::Text(c.name.clone()),
                Cell::Num(*r),
                Cell::Num(*e),
            ]);
        }
    }
}

/// Columnar projection of a report; see the module table.
pub fn tables(report: &Report) -> Vec<Table> {
    match report {
        Report::SymbolSweep { rows, .. } => {
            let dim = rows.first().map_or(0, |r| r.frequency.len());
            let quad = rows.iter().any(|r| r.quadrature.is_some());
            let tail: &[&str] = if quad {
                &["re", "im", "quad_re", "quad_im"]
            } else {
                &["re", "im"]
            };
            let mut t = with_xi("symbols", &["tau"], dim, tail);
            for r in rows {
                let mut row = vec![Cell::Num(r.tau)];
                row.extend(r.frequency.iter().map(|v| Cell::Num(*v)));
                row.extend([Cell::Num(r.value.re), Cell::Num(r.value.im)]);
                if let Some(q) = r.quadrature {
                    row.extend([Cell::Num(q.re), Cell::Num(q.im)]);
                }
                t.rows.push(row);
            }
            vec![t]
        }
        Report::EstimateSweep { rows, .. } => {
            let dim = rows.first().map_or(0, |r| r.estimate.frequency.len());
            let mut t = with_xi(
                "estimates",
                &["tau"],
                dim,
                &[
                    "re",
                    "im",
                    "radius",
                    "exact_re",
                    "exact_im",
                    "bias_budget",
                    "low_precision",
                ],
            );
            for r in rows {
                let e = &r.estimate;
                let mut row = vec![Cell::Num(r.tau)];
                row.extend(e.frequency.iter().map(|v| Cell::Num(*v)));
                row.extend([
                    Cell::Num(e.value.re),
                    Cell::Num(e.value.im),
                    Cell::Num(e.value.confidence_radius.unwrap_or(0.0)),
                    Cell::Num(r.exact.re),
                    Cell::Num(r.exact.im),
                    Cell::Num(e.bias_budget),
                    Cell::Bool(e.low_precision),
                ]);
                t.rows.push(row);
            }
            vec![t]
        }
        Report::Indices {
            indices: report, ..
        } => {
            let mut h = Table::new(
                "h_curves",
                &[
                    "point",
                    "tau",
                    "curve",
                    "radius",
                    "value",
                    "log_radius",
                    "log_value",
                ],
            );
            let mut w = Table::new(
                "fit_windows",
                &["point", "tau", "curve", "window_radius", "exponent"],
            );
            let mut s = Table::new(
                "indices",
                &["point", "tau", "beta", "beta_under", "delta_bar", "delta"],
            );
            let opt = |v: Option<f64>| v.map_or(Cell::Text(String::new()), Cell::Num);
            let mut summary = |point: u64, tau: f64, i: &IndexSet| {
                s.rows.push(vec![
                    Cell::Int(point),
                    Cell::Num(tau),
                    Cell::Num(i.beta),
                    Cell::Num(i.beta_under),
                    opt(i.delta_bar),
                    opt(i.delta),
                ]);
            };
            summary(0, f64::NAN, &report.at_start);
            curve_rows(&mut h, &mut w, 0, f64::NAN, &report.start_curves);
            for (i, l) in report.at_infinity.iter().enumerate() {
                summary(i as u64 + 1, l.tau, &l.indices);
                curve_rows(&mut h, &mut w, i as u64 + 1, l.tau, &l.curves);
            }
            vec![s, h, w]
        }
        Report::Inequality(r) => {
            let mut t = Table::new(
                "cells",
                &[
                    "t",
                    "radius",
                    "lhs",
                    "lhs_radius",
                    "functional",
                    "rhs",
                    "constant",
                    "margin",
                    "pass",
                    "cell_constant",
                ],
            );
            for c in &r.cells {
                t.rows.push(vec![
                    Cell::Num(c.t),
                    Cell::Num(c.radius),
                    Cell::Num(c.lhs),
                    Cell::Num(c.lhs_radius),
                    Cell::Num(c.functional),
                    Cell::Num(c.rhs),
                    Cell::Num(c.constant),
                    Cell::Num(c.margin),
                    Cell::Bool(c.pass),
                    Cell::Num(c.cell_constant),
                ]);
            }
            vec![t]
        }
        Report::Scaling { reports } => {
            let mut t = Table::new(
                "quantiles",
                &["lambda", "t", "q10", "q50", "q90", "verdict"],
            );
            for r in reports {
                let verdict = serde_json::to_value(r.verdict)
                    .map_or(String::new(), |v| v.as_str().unwrap_or("").into());
                for q in &r.quantiles {
                    t.rows.push(vec![
                        Cell::Num(r.lambda),
                        Cell::Num(q.t),
                        Cell::Num(q.q10),
                        Cell::Num(q.q50),
                        Cell::Num(q.q90),
                        Cell::Text(verdict.clone()),
                    ]);
                }
            }
            vec![t]
        }
        Report::PVariation { reports, .. } => {
            let mut t = Table::new(
                "pvariation",
                &["p", "level", "sum", "running_max", "verdict"],
            );
            for r in reports {
                let verdict = serde_json::to_value(r.verdict)
                    .map_or(String::new(), |v| v.as_str().unwrap_or("").into());
                for ((k, s), m) in r.levels.iter().zip(&r.sums).zip(&r.running_max) {
                    t.rows.push(vec![
                        Cell::Num(r.p),
                        Cell::Int(*k as u64),
                        Cell::Num(*s),
                        Cell::Num(*m),
                        Cell::Text(verdict.clone()),
                    ]);
                }
            }
            vec![t]
        }
        Report::ExpMoment(r) => {
            let mut t = with_xi(
                "expmoment",
                &["t"],
                r.xi.len(),
                &["exponent_bound", "bound", "mean", "std_error", "pass"],
            );
            let mut row = vec![Cell::Num(r.t)];
            row.extend(r.xi.iter().map(|v| Cell::Num(*v)));
            row.extend([
                Cell::Num(r.exponent_bound),
                Cell::Num(r.bound),
                Cell::Num(r.mean),
                Cell::Num(r.std_error),
                Cell::Bool(r.pass),
            ]);
            t.rows.push(row);
            vec![t]
        }
    }
}

/// Writes every table of `report` into `dir`.
pub fn emit_plot_data(report: &Report, format: Format, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    tables(report)
        .iter()
        .map(|t| t.write(dir, format))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{InequalityCell, InequalityKind};

    fn inequality() -> Report {
        let cell = InequalityCell {
            t: 0.1,
            radius: 1.0,
            lhs: 0.0,
            lhs_radius: 0.0,
            functional: 2.0,
            rhs: 3.2,
            constant: 16.0,
            margin: 3.2,
            pass: true,
            cell_constant: 0.0,
        };
        Report::Inequality(InequalityReport {
            kind: InequalityKind::Upper,
            model_hash: "h".into(),
            seed: 1,
            paths: 10,
            step: 0.01,
            tau: 0.0,
            x: vec![0.0],
            cells: vec![cell, cell],
            fitted_constant: 0.0,
        })
    }

    #[test]
    fn one_inequality_file() {
        let dir = tempfile::tempdir().unwrap();
        let files = emit_plot_data(&inequality(), Format::Csv, dir.path()).unwrap();
        assert_eq!(files.len(), 1);
        let text = std::fs::read_to_string(&files[0]).unwrap();
        assert!(text.starts_with("t,radius,lhs,lhs_radius,functional,rhs,constant,margin,pass"));
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn json_lines_rows() {
        let dir = tempfile::tempdir().unwrap();
        let files = emit_plot_data(&inequality(), Format::JsonLines, dir.path()).unwrap();
        let text = std::fs::read_to_string(&files[0]).unwrap();
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(first["margin"], 3.2);
        assert_eq!(first["pass"], true);
    }

    #[test]
    fn report_round_trips() {
        let r = inequality();
        let back: Report = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
