//! Scene files: cable constants, obstacles, workspace bounds and planner
//! settings, all in SI units spelled out in the field names.

use elastica_steer::collision::{Obstacle3D, ObstacleError};
use elastica_steer::cspace::{Axis, GridSpec, Mode};
use elastica_steer::elastica::{CableProperties, ElasticaError};
use elastica_steer::geometry::{GeometryError, Polygon};
use elastica_steer::planner::{
    EndpointBounds, Environment, Obstacles, PlanError, PlannerParams, DEFAULT_MAX_EXPANSIONS,
    DEFAULT_WEIGHT,
};
use nalgebra::Vector2;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonSpec {
    pub vertices_m: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Workspace {
    pub min_m: [f64; 3],
    pub max_m: [f64; 3],
}

/// Grid axes by name. Missing axes take the default resolution.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridAxes {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0_m: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y0_m: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z0_m: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_x_rad: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_y_rad: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_base_rad: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s0_m: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_tilde_m: Option<Axis>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlannerSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_scale_m_per_rad: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_expansions: Option<usize>,
    #[serde(default)]
    pub grid: GridAxes,
}

/// The on-disk scene document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub mode: Mode,
    pub cable: CableProperties,
    #[serde(default)]
    pub obstacles_2d: Vec<PolygonSpec>,
    #[serde(default)]
    pub obstacles_3d: Vec<Obstacle3D>,
    pub workspace: Workspace,
    #[serde(default)]
    pub planner: PlannerSpec,
}

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("cable: {0}")]
    Cable(#[source] ElasticaError),
    #[error("obstacles_2d[{index}]: {source}")]
    Polygon { index: usize, source: GeometryError },
    #[error("obstacles_3d[{index}]: {source}")]
    Obstacle { index: usize, source: ObstacleError },
    #[error("{0}")]
    Mode(String),
    #[error("workspace: {0}")]
    Bounds(String),
    #[error("planner: {0}")]
    Planner(#[source] PlanError),
}

impl SceneError {
    /// Stable identifier for each failure class.
    pub fn code(&self) -> &'static str {
        match self {
            SceneError::Schema { .. } => "E_SCHEMA",
            SceneError::Cable(_) => "E_CABLE",
            SceneError::Polygon { .. } => "E_POLYGON",
            SceneError::Obstacle { .. } => "E_OBSTACLE",
            SceneError::Mode(_) => "E_MODE",
            SceneError::Bounds(_) => "E_BOUNDS",
            SceneError::Planner(_) => "E_PLANNER",
        }
    }
}

/// Deserializes JSON, reporting the path to the offending field and the
/// line/column of the error.
pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, SceneError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        SceneError::Schema {
            path: if path.is_empty() || path == "." {
                "(root)".into()
            } else {
                path
            },
            message: inner.to_string(),
        }
    })
}

/// A validated scene with every default filled in.
#[derive(Debug, Clone)]
pub struct Scene {
    pub file: SceneFile,
    pub polygons: Vec<Polygon>,
    pub env: Environment,
    pub params: PlannerParams,
}

pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    let file: SceneFile = from_json(text)?;
    Scene::from_file(file)
}

impl Scene {
    pub fn from_file(mut file: SceneFile) -> Result<Self, SceneError> {
        file.cable.validate().map_err(SceneError::Cable)?;
        let ws = file.workspace;
        let bounds = EndpointBounds {
            min: ws.min_m,
            max: ws.max_m,
        };
        if !(ws.min_m.iter().chain(&ws.max_m).all(|v| v.is_finite()) && bounds.is_nonempty()) {
            return Err(SceneError::Bounds(format!(
                "min_m {:?} must be finite and not exceed max_m {:?}",
                ws.min_m, ws.max_m
            )));
        }
        let obstacles = match file.mode {
            Mode::Planar => {
                if !file.obstacles_3d.is_empty() {
                    return Err(SceneError::Mode(
                        "planar scenes take obstacles_2d only".into(),
                    ));
                }
                let polygons = file
                    .obstacles_2d
                    .iter()
                    .enumerate()
                    .map(|(index, p)| {
                        Polygon::new(
                            p.vertices_m
                                .iter()
                                .map(|v| Vector2::new(v[0], v[1]))
                                .collect(),
                        )
                        .map_err(|source| SceneError::Polygon { index, source })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                (Obstacles::from_polygons(&polygons), polygons)
            }
            Mode::SemiSpatial => {
                if !file.obstacles_2d.is_empty() {
                    return Err(SceneError::Mode(
                        "semi_spatial scenes take obstacles_3d only".into(),
                    ));
                }
                for (index, o) in file.obstacles_3d.iter().enumerate() {
                    o.validate()
                        .map_err(|source| SceneError::Obstacle { index, source })?;
                }
                (Obstacles::Spatial(file.obstacles_3d.clone()), Vec::new())
            }
        };
        file.planner = resolve_planner(&file.planner, file.mode, file.cable.length, &ws);
        let params = planner_params(&file.planner, file.mode);
        params
            .validate(file.cable.length)
            .map_err(SceneError::Planner)?;
        let env = Environment::new(file.cable, obstacles.0, bounds);
        Ok(Scene {
            file,
            polygons: obstacles.1,
            env,
            params,
        })
    }

    pub fn mode(&self) -> Mode {
        self.file.mode
    }

    pub fn length(&self) -> f64 {
        self.file.cable.length
    }

    /// Canonical JSON of the resolved scene.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string_pretty(&self.file).expect("scene serializes")
    }

    /// SHA-256 of [`Scene::canonical_json`], hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }
}

/// Fills every unset planner field with its default.
fn resolve_planner(spec: &PlannerSpec, mode: Mode, length: f64, ws: &Workspace) -> PlannerSpec {
    let bounds: Vec<(f64, f64)> = (0..3).map(|i| (ws.min_m[i], ws.max_m[i])).collect();
    let d = GridSpec::with_default_resolution(mode, length, &bounds);
    let g = &spec.grid;
    let pick = |v: Option<Axis>, default: Axis| Some(v.unwrap_or(default));
    let grid = match mode {
        Mode::Planar => GridAxes {
            x0_m: pick(g.x0_m, d.axes[0]),
            y0_m: pick(g.y0_m, d.axes[1]),
            phi_base_rad: pick(g.phi_base_rad, d.axes[2]),
            sigma: pick(g.sigma, d.axes[3]),
            s0_m: pick(g.s0_m, d.axes[4]),
            l_tilde_m: pick(g.l_tilde_m, d.axes[5]),
            ..GridAxes::default()
        },
        Mode::SemiSpatial => GridAxes {
            x0_m: pick(g.x0_m, d.axes[0]),
            y0_m: pick(g.y0_m, d.axes[1]),
            z0_m: pick(g.z0_m, d.axes[2]),
            phi_x_rad: pick(g.phi_x_rad, d.axes[3]),
            phi_y_rad: pick(g.phi_y_rad, d.axes[4]),
            phi_base_rad: pick(g.phi_base_rad, d.axes[5]),
            sigma: pick(g.sigma, d.axes[6]),
            s0_m: pick(g.s0_m, d.axes[7]),
            l_tilde_m: pick(g.l_tilde_m, d.axes[8]),
        },
    };
    PlannerSpec {
        w: Some(spec.w.unwrap_or(DEFAULT_WEIGHT)),
        angle_scale_m_per_rad: Some(spec.angle_scale_m_per_rad.unwrap_or(1.0)),
        max_expansions: Some(spec.max_expansions.unwrap_or(DEFAULT_MAX_EXPANSIONS)),
        grid,
    }
}

fn planner_params(spec: &PlannerSpec, mode: Mode) -> PlannerParams {
    let g = &spec.grid;
    let axes: Vec<Option<Axis>> = match mode {
        Mode::Planar => vec![g.x0_m, g.y0_m, g.phi_base_rad, g.sigma, g.s0_m, g.l_tilde_m],
        Mode::SemiSpatial => vec![
            g.x0_m,
            g.y0_m,
            g.z0_m,
            g.phi_x_rad,
            g.phi_y_rad,
            g.phi_base_rad,
            g.sigma,
            g.s0_m,
            g.l_tilde_m,
        ],
    };
    PlannerParams {
        w: spec.w.unwrap_or(DEFAULT_WEIGHT),
        grid: GridSpec::new(
            mode,
            axes.into_iter().map(|a| a.expect("resolved")).collect(),
        ),
        angle_scale: spec.angle_scale_m_per_rad.expect("resolved"),
        max_expansions: spec.max_expansions.unwrap_or(DEFAULT_MAX_EXPANSIONS),
    }
}

/// A scene with no obstacles and every default written out, for use as a
/// starting point.
pub fn default_scene(mode: Mode, length: f64) -> Result<Scene, SceneError> {
    let r = 1.5 * length;
    let file = SceneFile {
        mode,
        cable: CableProperties::new(length, 0.0027, 0.013, 9.81).map_err(SceneError::Cable)?,
        obstacles_2d: Vec::new(),
        obstacles_3d: Vec::new(),
        workspace: Workspace {
            min_m: [-r, -r, if mode == Mode::Planar { 0.0 } else { -r }],
            max_m: [r, r, if mode == Mode::Planar { 0.0 } else { r }],
        },
        planner: PlannerSpec::default(),
    };
    Scene::from_file(file)
}
