//! Model specification documents (TOML or JSON).
//!
//! Top-level keys: `dimension`, optional `space_time_lift`, `drift`,
//! `diffusion`, `jumps`, `truncation` and `catalog`. For the `additive-bm`
//! and `det-jump-unit` catalog tags the coefficient tables may be omitted;
//! they are then filled from the tag. Serialization always writes every
//! table, so `to_toml(parse(to_toml(m)))` is byte-identical to `to_toml(m)`.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::catalog::{self, CatalogTag};
use super::field::CoefficientField;
use super::kernel::{JumpKernel, Truncation, TruncationShape};
use super::ProcessModel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelFormat {
    Toml,
    Json,
}

impl ModelFormat {
    /// JSON when the document starts with `{`, TOML otherwise.
    pub fn detect(text: &str) -> Self {
        if text.trim_start().starts_with('{') {
            ModelFormat::Json
        } else {
            ModelFormat::Toml
        }
    }
}

/// Raw document as written by users, before defaults and checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub dimension: usize,
    #[serde(default)]
    pub space_time_lift: usize,
    #[serde(default)]
    pub drift: Option<CoefficientField>,
    #[serde(default)]
    pub diffusion: Option<CoefficientField>,
    #[serde(default)]
    pub jumps: Option<JumpKernel>,
    #[serde(default)]
    pub truncation: Option<Truncation>,
    #[serde(default)]
    pub catalog: Option<CatalogTag>,
}

fn at(path: &str, key: &str) -> String {
    if key.is_empty() {
        path.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn check_field(path: &str, field: &CoefficientField, dim: usize, allowed: &[usize]) -> Result<()> {
    field
        .check(dim)
        .map_err(|(k, m)| Error::parse(at(path, &k), m))?;
    let n = field.components();
    if !allowed.contains(&n) {
        return Err(Error::parse(
            path,
            format!("expected {allowed:?} components, found {n}"),
        ));
    }
    Ok(())
}

impl ModelDocument {
    /// Applies catalog defaults and checks every constraint, naming the
    /// offending key on failure.
    pub fn build(self) -> Result<ProcessModel> {
        let d = self.dimension;
        if d == 0 {
            return Err(Error::parse("dimension", "must be at least 1"));
        }
        let template = match &self.catalog {
            Some(CatalogTag::AdditiveBm { variance }) => {
                if variance.is_empty() {
                    return Err(Error::parse("catalog.variance", "must not be empty"));
                }
                Some(catalog::additive_bm(d, variance.clone()))
            }
            Some(CatalogTag::DetJumpUnit) => Some(catalog::det_jump_unit(d)),
            _ => None,
        };
        let pick = |given: Option<CoefficientField>, key: &str, from: Option<CoefficientField>| {
            given
                .or(from)
                .ok_or_else(|| Error::parse(key, "missing required parameter"))
        };
        let drift = pick(
            self.drift,
            "drift",
            template.as_ref().map(|t| t.drift.clone()),
        )?;
        let diffusion = pick(
            self.diffusion,
            "diffusion",
            template.as_ref().map(|t| t.diffusion.clone()),
        )?;
        let jumps = match (self.jumps, &template) {
            (Some(j), _) => j,
            (None, Some(t)) => t.jumps.clone(),
            (None, None) => JumpKernel::None,
        };
        let truncation = self.truncation.unwrap_or_default();

        check_field("drift", &drift, d, &[d])?;
        check_field("diffusion", &diffusion, d, &[1, d * d])?;
        match &jumps {
            JumpKernel::None => {}
            JumpKernel::CompoundPoisson { intensity, law } => {
                check_field("jumps.intensity", intensity, d, &[1])?;
                law.check()
                    .map_err(|(k, m)| Error::parse(at("jumps.law", &k), m))?;
            }
            JumpKernel::SymmetricAlphaStable { alpha, scale } => {
                if !(*alpha > 0.0 && *alpha < 2.0) {
                    return Err(Error::parse("jumps.alpha", "alpha outside (0,2)"));
                }
                check_field("jumps.scale", scale, d, &[1])?;
            }
        }
        truncation
            .check()
            .map_err(|(k, m)| Error::parse(at("truncation", &k), m))?;
        if truncation.shape == TruncationShape::Zero && !jumps.finite_activity() {
            return Err(Error::parse(
                "truncation.shape",
                "zero truncation requires a finite-activity kernel",
            ));
        }

        let model = ProcessModel {
            dimension: d,
            space_time_lift: self.space_time_lift,
            drift,
            diffusion,
            jumps,
            truncation,
            catalog: self.catalog,
        };
        if let Some(t) = template {
            if t.drift != model.drift || t.diffusion != model.diffusion || t.jumps != model.jumps {
                return Err(Error::parse(
                    "catalog",
                    format!(
                        "coefficients disagree with the {} family",
                        t.catalog.as_ref().map_or("", |c| c.name())
                    ),
                ));
            }
        }
        let family_ok = match &model.catalog {
            Some(CatalogTag::PureDrift) => model.jumps.is_none() && model.diffusion.is_zero(),
            Some(CatalogTag::AlphaStableLevy) => {
                matches!(model.jumps, JumpKernel::SymmetricAlphaStable { .. })
            }
            Some(CatalogTag::CompoundPoisson) | Some(CatalogTag::JumpDiffusion) => {
                matches!(model.jumps, JumpKernel::CompoundPoisson { .. })
            }
            _ => true,
        };
        if !family_ok {
            return Err(Error::parse(
                "catalog",
                format!(
                    "coefficients disagree with the {} family",
                    model.catalog.as_ref().map_or("", |c| c.name())
                ),
            ));
        }
        Ok(model)
    }
}

fn path_string(path: &serde_path_to_error::Path) -> String {
    let s = path.to_string();
    if s == "." {
        String::new()
    } else {
        s
    }
}

/// Parses a model document, reporting the key path of any error.
pub fn parse_model_spec(text: &str, format: ModelFormat) -> Result<ProcessModel> {
    let doc: ModelDocument = match format {
        ModelFormat::Toml => {
            let de =
                toml::de::Deserializer::parse(text).map_err(|e| Error::parse("", e.to_string()))?;
            serde_path_to_error::deserialize(de)
                .map_err(|e| Error::parse(path_string(e.path()), e.inner().message().to_string()))?
        }
        ModelFormat::Json => {
            let mut de = serde_json::Deserializer::from_str(text);
            serde_path_to_error::deserialize(&mut de)
                .map_err(|e| Error::parse(path_string(e.path()), e.inner().to_string()))?
        }
    };
    doc.build()
}

pub fn to_toml(model: &ProcessModel) -> String {
    toml::to_string(model).expect("models always serialize to TOML")
}

pub fn to_json(model: &ProcessModel) -> String {
    serde_json::to_string_pretty(model).expect("models always serialize to JSON")
}

/// Hex SHA-256 of the canonical TOML form.
pub fn model_hash(model: &ProcessModel) -> String {
    let digest = Sha256::digest(to_toml(model).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_pure_drift_document() {
        let m = parse_model_spec(
            "dimension = 1\n[drift]\nkind = \"constant\"\nvalues = [2.0]\n[diffusion]\nkind = \"constant\"\nvalues = [0.0]\n",
            ModelFormat::Toml,
        )
        .unwrap();
        assert_eq!(m.dimension, 1);
        assert_eq!(m.drift, CoefficientField::constant(vec![2.0]));
        assert!(m.jumps.is_none());
    }

    #[test]
    fn alpha_out_of_range_names_key() {
        let text = r#"
dimension = 1
[drift]
kind = "constant"
values = [0.0]
[diffusion]
kind = "constant"
values = [0.0]
[jumps]
family = "symmetric-alpha-stable"
alpha = 2.5
[jumps.scale]
kind = "constant"
values = [1.0]
"#;
        match parse_model_spec(text, ModelFormat::Toml) {
            Err(Error::Parse { path, message }) => {
                assert_eq!(path, "jumps.alpha");
                assert!(message.contains("alpha outside (0,2)"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_family_names_path() {
        let text = "dimension = 1\n[drift]\nkind = \"constant\"\nvalues = [0.0]\n[diffusion]\nkind = \"constant\"\nvalues = [0.0]\n[jumps]\nfamily = \"tempered\"\n";
        match parse_model_spec(text, ModelFormat::Toml) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "jumps.family"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn catalog_tag_fills_coefficients() {
        let text = "dimension = 1\n[catalog]\nname = \"additive-bm\"\nvariance = [0.0, 0.0, 1.0]\n";
        let m = parse_model_spec(text, ModelFormat::Toml).unwrap();
        assert_eq!(m, catalog::additive_bm(1, vec![0.0, 0.0, 1.0]));
    }

    #[test]
    fn json_and_toml_agree() {
        for e in catalog::entries() {
            let a = parse_model_spec(&to_json(&e.model), ModelFormat::Json).unwrap();
            let b = parse_model_spec(&to_toml(&e.model), ModelFormat::Toml).unwrap();
            assert_eq!(a, b);
            assert_eq!(a, e.model);
        }
    }
}
