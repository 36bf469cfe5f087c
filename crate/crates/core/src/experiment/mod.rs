//! Experiment runner behind the `itosym` binary: reads a configuration,
//! runs its task and persists a manifest, the report and its tables.

pub mod config;
pub mod emit;

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

pub use config::{EstimateSweep, ExperimentConfig, IndicesTask, SymbolSweep, Task};
pub use emit::{emit_plot_data, tables, Cell, EstimateRow, Format, Report, SymbolRow, Table};

use crate::error::{Error, Result};
use crate::estimate::{estimate_symbols, EstimatorConfig};
use crate::indices::{index_report, IndexConfig};
use crate::model::{catalog, model_hash, ProcessModel};
use crate::symbol::{Symbol, SymbolValue};
use crate::verify::{
    asymptotic_scaling, check_max_inequality, exponential_moment_check, flip_point, p_variation,
};

pub const OUT_ENV: &str = "ITOSYM_OUT";
pub const DEFAULT_OUT: &str = "./itosym-out";

/// Output root from `ITOSYM_OUT`, else `./itosym-out`.
pub fn output_root() -> PathBuf {
    std::env::var_os(OUT_ENV).map_or_else(|| PathBuf::from(DEFAULT_OUT), PathBuf::from)
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub name: String,
    pub task: String,
    pub config: String,
    pub model_hash: String,
    pub version: String,
    pub wall_time_seconds: f64,
    pub artifacts: Vec<String>,
}

fn check_dim(model: &ProcessModel, what: &str, v: &[f64]) -> Result<()> {
    if v.len() != model.state_dim() {
        return Err(Error::InvalidConfig(format!(
            "{what} has length {}, the model state dimension is {}",
            v.len(),
            model.state_dim()
        )));
    }
    Ok(())
}

/// Runs a task on a model without touching the file system.
pub fn run_task(model: &ProcessModel, task: &Task) -> Result<Report> {
    let hash = model_hash(model);
    Ok(match task {
        Task::SymbolSweep(s) => {
            check_dim(model, "x", &s.x)?;
            let sym = Symbol::new(model)?;
            let mut rows = Vec::with_capacity(s.taus.len() * s.frequencies.len());
            for &tau in &s.taus {
                for xi in &s.frequencies {
                    check_dim(model, "frequency", xi)?;
                    let quadrature = if s.quadrature {
                        Some(SymbolValue::analytic(sym.eval_quadrature(tau, &s.x, xi)?))
                    } else {
                        None
                    };
                    rows.push(SymbolRow {
                        tau,
                        frequency: xi.clone(),
                        value: SymbolValue::analytic(sym.eval(tau, &s.x, xi)?),
                        quadrature,
                    });
                }
            }
            Report::SymbolSweep {
                model_hash: hash,
                rows,
            }
        }
        Task::EstimateSweep(s) => {
            let mut cfg = EstimatorConfig::new(s.paths, s.seed);
            cfg.extrapolation = s.extrapolation;
            if let Some(r) = s.radius {
                cfg.radius = r;
            }
            if let Some(l) = &s.lags {
                cfg.lags = l.clone();
            }
            if let Some(h) = s.step {
                cfg.step = h;
            }
            let sym = Symbol::new(model)?;
            let mut rows = Vec::new();
            for &tau in &s.taus {
                for estimate in estimate_symbols(model, tau, &s.x, &s.frequencies, &cfg)? {
                    let exact = SymbolValue::analytic(sym.eval(tau, &s.x, &estimate.frequency)?);
                    rows.push(EstimateRow {
                        tau,
                        estimate,
                        exact,
                    });
                }
            }
            Report::EstimateSweep {
                model_hash: hash,
                seed: s.seed,
                paths: s.paths,
                rows,
            }
        }
        Task::Indices(t) => {
            let mut cfg = IndexConfig::default_for(model);
            if let Some(p) = &t.points {
                for (_, x) in p {
                    check_dim(model, "point", x)?;
                }
                cfg.points = p.clone();
            }
            if let Some(r) = &t.start_radii {
                cfg.start_radii = r.clone();
            }
            if let Some(r) = &t.local_radii {
                cfg.local_radii = r.clone();
            }
            Report::Indices {
                model_hash: hash,
                indices: index_report(model, &cfg)?,
            }
        }
        Task::VerifyMaxInequality(c) => Report::Inequality(check_max_inequality(model, c)?),
        Task::VerifyScaling(c) => Report::Scaling {
            reports: asymptotic_scaling(model, c)?,
        },
        Task::VerifyPvariation(c) => {
            let reports = p_variation(model, c)?;
            Report::PVariation {
                flip: flip_point(&reports),
                reports,
            }
        }
        Task::VerifyExpmoment(c) => Report::ExpMoment(exponential_moment_check(model, c)?),
    })
}

/// Parses `config_path`, runs it and writes `manifest.json`,
/// `report.json` and the CSV tables into the output directory. Nothing is
/// written when parsing or the task fails.
pub fn run_experiment(config_path: &Path, out_root: &Path) -> Result<(PathBuf, Report)> {
    let text = std::fs::read_to_string(config_path)?;
    let cfg = ExperimentConfig::parse(&text)?;
    let base = config_path.parent().unwrap_or(Path::new("."));
    let model = cfg.model(base)?;
    let start = Instant::now();
    let report = run_task(&model, &cfg.task)?;
    let wall = start.elapsed().as_secs_f64();
    let dir = cfg
        .output
        .clone()
        .unwrap_or_else(|| out_root.join(&cfg.name));
    std::fs::create_dir_all(&dir)?;
    let report_path = dir.join("report.json");
    std::fs::write(&report_path, to_pretty_json(&report)?)?;
    let mut artifacts = vec!["report.json".to_string()];
    for p in emit_plot_data(&report, Format::Csv, &dir)? {
        artifacts.push(
            p.file_name()
                .map_or(String::new(), |n| n.to_string_lossy().into_owned()),
        );
    }
    let manifest = Manifest {
        name: cfg.name.clone(),
        task: cfg.task.kind().into(),
        config: text,
        model_hash: model_hash(&model),
        version: env!("CARGO_PKG_VERSION").into(),
        wall_time_seconds: wall,
        artifacts,
    };
    std::fs::write(dir.join("manifest.json"), to_pretty_json(&manifest)?)?;
    Ok((dir, report))
}

pub fn to_pretty_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.into()))
}

pub fn read_report(path: &Path) -> Result<Report> {
    let text = std::fs::read_to_string(path)?;
    let mut de = serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| Error::Parse {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

/// Catalog rows: name, symbol, known indices, note.
pub fn catalog_table() -> Table {
    let mut t = Table {
        name: "catalog".into(),
        headers: ["name", "symbol", "indices", "note"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows: Vec::new(),
    };
    for e in catalog::entries() {
        t.rows.push(vec![
            Cell::Text(e.name.into()),
            Cell::Text(e.symbol.into()),
            Cell::Text(e.indices.into()),
            Cell::Text(e.note.into()),
        ]);
    }
    t
}
