//! Configuration-file ingestion: user-defined platforms and energy-model
//! coefficients, both JSON.

use std::fs;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::optimize::EnergyModel;
use crate::platform::FabricationPlatform;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("invalid configuration in {path}: {reason}")]
    Invalid { path: String, reason: String },
}

/// Top-level layout of a platforms file: a `platforms` array (every field of
/// the platform record required) and an optional `energy_model` section whose
/// four fields all carry defaults.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub platforms: Vec<FabricationPlatform>,
    #[serde(default)]
    pub energy_model: Option<EnergyModel>,
}

pub fn load_config(path: &Path) -> Result<ConfigFile, ConfigError> {
    let display = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: display.clone(),
        source,
    })?;
    let config: ConfigFile = serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
        path: display.clone(),
        source,
    })?;
    if config.platforms.is_empty() {
        return Err(ConfigError::Invalid {
            path: display,
            reason: "platforms array is empty".to_string(),
        });
    }
    for platform in &config.platforms {
        platform.validate().map_err(|e| ConfigError::Invalid {
            path: display.clone(),
            reason: e.to_string(),
        })?;
    }
    if let Some(energy) = &config.energy_model {
        energy.validate().map_err(|e| ConfigError::Invalid {
            path: display.clone(),
            reason: e.to_string(),
        })?;
    }
    Ok(config)
}

/// Load a bare energy-model object (all four fields optional).
pub fn load_energy_model(path: &Path) -> Result<EnergyModel, ConfigError> {
    let display = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: display.clone(),
        source,
    })?;
    let energy: EnergyModel = serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
        path: display.clone(),
        source,
    })?;
    energy.validate().map_err(|e| ConfigError::Invalid {
        path: display,
        reason: e.to_string(),
    })?;
    Ok(energy)
}
