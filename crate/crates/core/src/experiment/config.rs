//! Experiment configuration files (TOML).
//!
//! ```toml
//! name = "bm-symbols"
//! # output = "runs/bm"          # default: $ITOSYM_OUT/<name>
//! model_file = "models/bm.toml" # or an inline [model] table
//!
//! [task]
//! kind = "symbol-sweep"
//! taus = [0.0, 0.5]
//! x = [0.0]
//! frequencies = [[1.0], [2.0]]
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::Extrapolation;
use crate::model::{parse_model_spec, ModelFormat, ProcessModel};
use crate::verify::{ExpMomentConfig, MaxInequalityConfig, PVariationConfig, ScalingConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSweep {
    pub taus: Vec<f64>,
    pub x: Vec<f64>,
    pub frequencies: Vec<Vec<f64>>,
    /// Also evaluate the jump integral by quadrature.
    #[serde(default)]
    pub quadrature: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateSweep {
    pub taus: Vec<f64>,
    pub x: Vec<f64>,
    pub frequencies: Vec<Vec<f64>>,
    pub paths: usize,
    pub seed: u64,
    #[serde(default)]
    pub radius: Option<f64>,
    #[serde(default)]
    pub lags: Option<Vec<f64>>,
    #[serde(default)]
    pub extrapolation: Extrapolation,
    #[serde(default)]
    pub step: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndicesTask {
    /// Start points `(τ, x)` for the indices at infinity.
    #[serde(default)]
    pub points: Option<Vec<(f64, Vec<f64>)>>,
    #[serde(default)]
    pub start_radii: Option<Vec<f64>>,
    #[serde(default)]
    pub local_radii: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Task {
    SymbolSweep(SymbolSweep),
    EstimateSweep(EstimateSweep),
    Indices(IndicesTask),
    VerifyMaxInequality(MaxInequalityConfig),
    VerifyScaling(ScalingConfig),
    VerifyPvariation(PVariationConfig),
    VerifyExpmoment(ExpMomentConfig),
}

impl Task {
    pub fn kind(&self) -> &'static str {
        match self {
            Task::SymbolSweep(_) => "symbol-sweep",
            Task::EstimateSweep(_) => "estimate-sweep",
            Task::Indices(_) => "indices",
            Task::VerifyMaxInequality(_) => "verify-max-inequality",
            Task::VerifyScaling(_) => "verify-scaling",
            Task::VerifyPvariation(_) => "verify-pvariation",
            Task::VerifyExpmoment(_) => "verify-expmoment",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub model: Option<toml::Table>,
    #[serde(default)]
    pub model_file: Option<PathBuf>,
    pub task: Task,
}

fn path_string(p: &serde_path_to_error::Path) -> String {
    p.iter()
        .map(|s| s.to_string())
        .filter(|s| s != "?")
        .collect::<Vec<_>>()
        .join(".")
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let de =
            toml::de::Deserializer::parse(text).map_err(|e| Error::parse("", e.to_string()))?;
        let cfg: ExperimentConfig = serde_path_to_error::deserialize(de)
            .map_err(|e| Error::parse(path_string(e.path()), e.inner().message().to_string()))?;
        if cfg.name.is_empty() || cfg.name.contains(['/', '\\']) {
            return Err(Error::parse("name", "must be a non-empty plain file name"));
        }
        if cfg.model.is_some() == cfg.model_file.is_some() {
            return Err(Error::parse(
                "model",
                "give exactly one of `model` or `model_file`",
            ));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Builds the model; relative model files resolve against `base`.
    pub fn model(&self, base: &Path) -> Result<ProcessModel> {
        let prefix = |e: Error, root: &str| match e {
            Error::Parse { path, message } => Error::Parse {
                path: if path.is_empty() {
                    root.to_string()
                } else {
                    format!("{root}.{path}")
                },
                message,
            },
            other => other,
        };
        match (&self.model, &self.model_file) {
            (Some(table), _) => {
                let text =
                    toml::to_string(table).map_err(|e| Error::parse("model", e.to_string()))?;
                parse_model_spec(&text, ModelFormat::Toml).map_err(|e| prefix(e, "model"))
            }
            (None, Some(file)) => {
                let path = if file.is_absolute() {
                    file.clone()
                } else {
                    base.join(file)
                };
                let text = std::fs::read_to_string(&path)?;
                parse_model_spec(&text, ModelFormat::detect(&text))
                    .map_err(|e| prefix(e, "model_file"))
            }
            (None, None) => Err(Error::parse("model", "missing")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SWEEP: &str = r#"
name = "s"
[model.catalog]
name = "additive-bm"
variance = [0.0, 1.0]
[model]
dimension = 1
[task]
kind = "symbol-sweep"
taus = [0.0]
x = [0.0]
frequencies = [[1.0]]
"#;

    #[test]
    fn inline_model() {
        let c = ExperimentConfig::parse(SWEEP).unwrap();
        assert_eq!(c.task.kind(), "symbol-sweep");
        assert_eq!(c.model(Path::new(".")).unwrap().dimension, 1);
    }

    #[test]
    fn missing_paths_names_the_key() {
        let text = r#"
name = "e"
model_file = "m.toml"
[task]
kind = "estimate-sweep"
taus = [0.0]
x = [0.0]
frequencies = [[1.0]]
seed = 1
"#;
        match ExperimentConfig::parse(text) {
            Err(Error::Parse { message, .. }) => assert!(message.contains("paths"), "{message}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_task_kind() {
        let text = "name = \"x\"\nmodel_file = \"m\"\n[task]\nkind = \"nope\"\n";
        assert!(matches!(
            ExperimentConfig::parse(text),
            Err(Error::Parse { .. })
        ));
    }
}
