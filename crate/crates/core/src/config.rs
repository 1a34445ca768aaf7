//! TOML configuration files.
//!
//! A file holds either an explicit `[model]` table
//!
//! ```toml
//! [model]
//! omega0 = 1.0
//! hbar = 1.0            # optional
//! modes = [ { omega = 1.0, c = 0.1 } ]
//! ```
//!
//! or a `[preset]` table, never both:
//!
//! ```toml
//! [preset]
//! type = "spherical_cavity"
//! g = 0.5
//! R = 1.0
//! N = 4
//! convention = "paper"   # or "linear"
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{build_config_from_preset, FieldMode, FrequencyConvention, ModelConfig, SphericalCavityPreset};
use crate::scalar::Scalar;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    model: Option<ModelSection>,
    preset: Option<PresetSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelSection {
    omega0: f64,
    hbar: Option<f64>,
    modes: Vec<ModeEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModeEntry {
    omega: f64,
    c: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresetSection {
    #[serde(rename = "type")]
    kind: String,
    g: f64,
    #[serde(rename = "R")]
    radius: f64,
    #[serde(rename = "N")]
    mode_count: i64,
    convention: Option<String>,
}

fn convert<T: Scalar>(x: f64, what: &str) -> Result<T> {
    T::from_f64(x).ok_or_else(|| Error::Config(format!("{what} = {x} is not representable")))
}

fn parse_convention(name: Option<&str>) -> Result<FrequencyConvention> {
    match name {
        None | Some("paper") => Ok(FrequencyConvention::PaperLiteral),
        Some("linear") => Ok(FrequencyConvention::LinearInK),
        Some(other) => Err(Error::Config(format!(
            "preset.convention must be \"paper\" or \"linear\", got {other:?}"
        ))),
    }
}

/// Parses configuration text into a validated model.
pub fn parse_config<T: Scalar>(text: &str) -> Result<ModelConfig<T>> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    match (file.model, file.preset) {
        (Some(_), Some(_)) => Err(Error::Config("`model` and `preset` tables are mutually exclusive".into())),
        (None, None) => Err(Error::Config("config needs a `model` or a `preset` table".into())),
        (Some(model), None) => {
            let modes = model
                .modes
                .iter()
                .map(|m| Ok(FieldMode::new(convert(m.omega, "omega")?, convert(m.c, "c")?)))
                .collect::<Result<Vec<_>>>()?;
            let hbar = convert(model.hbar.unwrap_or(1.0), "hbar")?;
            ModelConfig::new(convert(model.omega0, "omega0")?, modes, hbar)
        }
        (None, Some(preset)) => {
            if preset.kind != "spherical_cavity" {
                return Err(Error::Config(format!(
                    "unknown preset.type {:?} (expected \"spherical_cavity\")",
                    preset.kind
                )));
            }
            if preset.mode_count < 1 {
                return Err(Error::invalid(format!("preset N must be at least 1, got {}", preset.mode_count)));
            }
            build_config_from_preset(&SphericalCavityPreset {
                g: convert(preset.g, "g")?,
                radius: convert(preset.radius, "R")?,
                mode_count: preset.mode_count as usize,
                convention: parse_convention(preset.convention.as_deref())?,
            })
        }
    }
}

pub fn load_config<T: Scalar>(path: impl AsRef<Path>) -> Result<ModelConfig<T>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_model() {
        let cfg: ModelConfig<f64> = parse_config(
            r#"
            [model]
            omega0 = 2.0
            modes = [ { omega = 3.0, c = 0.5 }, { omega = 1.5, c = -0.25 } ]
            "#,
        )
        .unwrap();
        assert_eq!(cfg.omega0(), 2.0);
        assert_eq!(cfg.hbar(), 1.0);
        assert_eq!(cfg.modes(), &[FieldMode::new(3.0, 0.5), FieldMode::new(1.5, -0.25)]);
    }

    #[test]
    fn explicit_hbar() {
        let cfg: ModelConfig<f64> =
            parse_config("[model]\nomega0 = 1\nhbar = 2.5\nmodes = [{ omega = 1, c = 0 }]\n").unwrap();
        assert_eq!(cfg.hbar(), 2.5);
    }

    #[test]
    fn preset_linear() {
        let cfg: ModelConfig<f64> = parse_config(
            "[preset]\ntype = \"spherical_cavity\"\ng = 0.5\nR = 2.0\nN = 2\nconvention = \"linear\"\n",
        )
        .unwrap();
        assert_eq!(cfg.mode_count(), 2);
        assert_eq!(cfg.modes()[1].omega, std::f64::consts::PI);
    }

    #[test]
    fn rejects_both_tables() {
        let err = parse_config::<f64>(
            "[model]\nomega0 = 1\nmodes = [{ omega = 1, c = 0 }]\n\
             [preset]\ntype = \"spherical_cavity\"\ng = 1\nR = 1\nN = 1\n",
        )
        .unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn rejects_bad_preset() {
        assert!(parse_config::<f64>("[preset]\ntype = \"box\"\ng = 1\nR = 1\nN = 1\n").is_err());
        assert!(parse_config::<f64>("[preset]\ntype = \"spherical_cavity\"\ng = 1\nR = 1\nN = 0\n").is_err());
        assert!(parse_config::<f64>(
            "[preset]\ntype = \"spherical_cavity\"\ng = 1\nR = 1\nN = 1\nconvention = \"odd\"\n"
        )
        .is_err());
        assert!(parse_config::<f64>("").is_err());
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(parse_config::<f64>("[model]\nomega0 = 1\nomega = 2\nmodes = [{ omega = 1, c = 0 }]\n").is_err());
    }
}
