//! Configuration and path documents.

use elastica_steer::cspace::{Cell, Mode};
use elastica_steer::elastica::{
    Config, Config2D, Config3D, ElasticaError, ElasticaParams, GripState,
};
use elastica_steer::planner::{Path, PlannerParams, SearchStats};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scene::{from_json, SceneError};

/// One cable configuration. The three spatial fields are present exactly
/// when the configuration is semi-spatial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub x0_m: f64,
    pub y0_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z0_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_x_rad: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_y_rad: Option<f64>,
    pub phi_base_rad: f64,
    pub k: f64,
    pub s0_m: f64,
    pub l_tilde_m: f64,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Parse(#[from] SceneError),
    #[error("{0}")]
    Invalid(#[from] ElasticaError),
    #[error("semi-spatial configurations need z0_m, phi_x_rad and phi_y_rad; planar ones must omit them")]
    Mode,
}

impl ConfigFile {
    pub fn to_config(&self) -> Result<Config, ConfigError> {
        let params = ElasticaParams::new(self.k, self.s0_m, self.l_tilde_m)?;
        match (self.z0_m, self.phi_x_rad, self.phi_y_rad) {
            (None, None, None) => Ok(Config::Planar(Config2D::new(
                self.x0_m,
                self.y0_m,
                self.phi_base_rad,
                params,
            )?)),
            (Some(z0), Some(px), Some(py)) => Ok(Config::Spatial(Config3D::new(
                self.x0_m,
                self.y0_m,
                z0,
                px,
                py,
                self.phi_base_rad,
                params,
            )?)),
            _ => Err(ConfigError::Mode),
        }
    }

    pub fn to_config_in(&self, mode: Mode) -> Result<Config, ConfigError> {
        let c = self.to_config()?;
        match (&c, mode) {
            (Config::Planar(_), Mode::Planar) | (Config::Spatial(_), Mode::SemiSpatial) => Ok(c),
            _ => Err(ConfigError::Mode),
        }
    }

    pub fn from_config(config: &Config) -> Self {
        match config {
            Config::Planar(c) => Self {
                x0_m: c.x0,
                y0_m: c.y0,
                z0_m: None,
                phi_x_rad: None,
                phi_y_rad: None,
                phi_base_rad: c.phi_base,
                k: c.params.k(),
                s0_m: c.params.s0(),
                l_tilde_m: c.params.l_tilde(),
            },
            Config::Spatial(c) => Self {
                x0_m: c.x0,
                y0_m: c.y0,
                z0_m: Some(c.z0),
                phi_x_rad: Some(c.phi_x),
                phi_y_rad: Some(c.phi_y),
                phi_base_rad: c.phi_base,
                k: c.params.k(),
                s0_m: c.params.s0(),
                l_tilde_m: c.params.l_tilde(),
            },
        }
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Ok(from_json(text)?)
    }
}

pub const PATH_FORMAT: &str = "steer-path/1";

/// A planned path and how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathFile {
    pub format: String,
    /// SHA-256 of the resolved scene's canonical JSON.
    pub scene_sha256: String,
    pub planner: PlannerParams,
    pub cells: Vec<Vec<i32>>,
    pub configs: Vec<ConfigFile>,
    pub psi: Vec<GripState>,
    pub stats: SearchStats,
}

impl PathFile {
    pub fn new(path: &Path, scene_sha256: String, planner: PlannerParams) -> Self {
        let dim = planner.grid.dim();
        Self {
            format: PATH_FORMAT.into(),
            scene_sha256,
            planner,
            cells: path
                .cells
                .iter()
                .map(|c: &Cell| c.0[..dim].to_vec())
                .collect(),
            configs: path.configs.iter().map(ConfigFile::from_config).collect(),
            psi: path.grips.clone(),
            stats: path.stats,
        }
    }

    /// Canonical serialization: pretty JSON in declaration order with
    /// shortest round-trip floats, plus a trailing newline.
    pub fn to_canonical(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("path serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self, SceneError> {
        let p: PathFile = from_json(text)?;
        if p.format != PATH_FORMAT {
            return Err(SceneError::Schema {
                path: "format".into(),
                message: format!("expected \"{PATH_FORMAT}\", got \"{}\"", p.format),
            });
        }
        Ok(p)
    }

    pub fn to_configs(&self) -> Result<Vec<Config>, ConfigError> {
        self.configs.iter().map(ConfigFile::to_config).collect()
    }
}
