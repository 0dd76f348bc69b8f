//! Subcommand bodies. Each returns a serializable report; `main` handles
//! reading files, printing and exit codes.

use std::path::Path as FsPath;

use elastica_steer::collision::{collides_2d_tagged, collides_3d_with, Witness};
use elastica_steer::cspace::{grip_feasible, in_c_free, in_c_stable, ExclusionTolerance};
use elastica_steer::elastica::{
    derive, CableProperties, CableShape, Config, Config3D, GripState, SpatialShape,
};
use elastica_steer::energy::{
    elastic_energy, gravity_ratio, stability_survey, zip_tie_example, EnergyBreakdown, SurveySpec,
};
use elastica_steer::oracle::elastic_energy_quadrature;
use elastica_steer::planner::{plan, validate_path, NoPathReason, PlanError, Violation};
use serde::Serialize;
use thiserror::Error;

use crate::files::{ConfigError, ConfigFile, PathFile};
use crate::scene::{Scene, SceneError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("[{code}] {message}")]
    Input { code: &'static str, message: String },
    #[error("no path: {0}")]
    NoPath(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } => 2,
            CliError::NoPath(_) => 3,
            CliError::Verification(_) => 4,
            CliError::Output(_) => 1,
        }
    }

    pub fn input(code: &'static str, message: impl Into<String>) -> Self {
        CliError::Input {
            code,
            message: message.into(),
        }
    }
}

impl From<SceneError> for CliError {
    fn from(e: SceneError) -> Self {
        CliError::input(e.code(), e.to_string())
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Parse(p) => p.into(),
            ConfigError::Invalid(e) => CliError::input("E_CONFIG", e.to_string()),
            ConfigError::Mode => CliError::input("E_MODE", ConfigError::Mode.to_string()),
        }
    }
}

pub fn read_text(path: &FsPath) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::input("E_IO", format!("{}: {e}", path.display())))
}

pub fn write_text(path: &FsPath, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}

pub fn parse_config(scene: &Scene, text: &str) -> Result<Config, CliError> {
    Ok(ConfigFile::parse(text)?.to_config_in(scene.mode())?)
}

pub fn cmd_plan(scene: &Scene, start: &Config, target: &Config) -> Result<PathFile, CliError> {
    match plan(start, target, &scene.env, &scene.params) {
        Ok(path) => Ok(PathFile::new(&path, scene.digest(), scene.params.clone())),
        Err(PlanError::NoPath { reason, stats }) => Err(CliError::NoPath(format!(
            "{} after {} expansions ({} cells evaluated, {} rejected)",
            match reason {
                NoPathReason::Exhausted => "search space exhausted",
                NoPathReason::Budget => "expansion budget spent",
            },
            stats.expansions,
            stats.evaluated,
            stats.rejected
        ))),
        Err(e) => Err(CliError::input("E_QUERY", e.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum WitnessReport {
    Planar(Witness<[f64; 2]>),
    Spatial(Witness<[f64; 3]>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub stable: bool,
    pub free: bool,
    pub grip_feasible: bool,
    pub in_workspace: bool,
    pub colliding: bool,
    /// First contact; `obstacle` indexes the scene's obstacle list.
    pub witness: Option<WitnessReport>,
    pub psi: GripState,
    /// Every test above passed.
    pub clear: bool,
}

/// Membership and collision verdict for one configuration, against the
/// exact (unfattened) free set.
pub fn cmd_check(scene: &Scene, config: &Config) -> CheckReport {
    let length = scene.length();
    let tol = ExclusionTolerance::exact(length);
    let stable = in_c_stable(config.params(), length, tol);
    let free = in_c_free(config.params(), length, tol);
    let psi = config.psi(length);
    let feasible = grip_feasible(&psi, length);
    let in_workspace = scene.env.bounds.contains(&psi);
    let witness = match (config, &scene.env.obstacles) {
        (Config::Planar(c), elastica_steer::planner::Obstacles::Planar { pieces, owners }) => {
            collides_2d_tagged(c, length, pieces, owners, &scene.env.collision)
                .witness
                .map(WitnessReport::Planar)
        }
        (Config::Spatial(c), elastica_steer::planner::Obstacles::Spatial(obs)) => {
            collides_3d_with(c, length, obs, &scene.env.collision)
                .witness
                .map(WitnessReport::Spatial)
        }
        _ => None,
    };
    let colliding = witness.is_some();
    CheckReport {
        stable,
        free,
        grip_feasible: feasible,
        in_workspace,
        colliding,
        witness,
        psi,
        clear: free && feasible && in_workspace && !colliding,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathCheckReport {
    pub scene_matches: bool,
    pub waypoints: Vec<CheckReport>,
    /// Grid-level problems found by re-validating the path.
    pub violations: Vec<Violation>,
    pub all_clear: bool,
}

pub fn cmd_check_path(scene: &Scene, path: &PathFile) -> Result<PathCheckReport, CliError> {
    let configs = path.to_configs()?;
    let waypoints: Vec<CheckReport> = configs.iter().map(|c| cmd_check(scene, c)).collect();
    let violations = validate_path(&configs, &scene.env, &path.planner.grid);
    let all_clear = waypoints.iter().all(|w| w.clear) && violations.is_empty();
    Ok(PathCheckReport {
        scene_matches: path.scene_sha256 == scene.digest(),
        waypoints,
        violations,
        all_clear,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeSample {
    pub s_m: f64,
    pub position_m: Vec<f64>,
    pub tangent_angle_rad: f64,
    pub curvature_per_m: f64,
}

/// `n` evenly spaced samples from base to tip.
pub fn cmd_shape(scene: &Scene, config: &Config, n: usize) -> Vec<ShapeSample> {
    let length = scene.length();
    let n = n.max(2);
    let at = |i: usize| length * i as f64 / (n - 1) as f64;
    match config {
        Config::Planar(c) => {
            let shape = CableShape::new(c, length);
            (0..n)
                .map(|i| {
                    let p = shape.point(at(i));
                    ShapeSample {
                        s_m: p.s,
                        position_m: vec![p.position.x, p.position.y],
                        tangent_angle_rad: p.tangent_angle,
                        curvature_per_m: p.curvature,
                    }
                })
                .collect()
        }
        Config::Spatial(c) => {
            let shape = SpatialShape::new(c, length);
            (0..n)
                .map(|i| {
                    let p = shape.point(at(i));
                    ShapeSample {
                        s_m: p.s,
                        position_m: vec![p.position.x, p.position.y, p.position.z],
                        tangent_angle_rad: p.tangent_angle,
                        curvature_per_m: p.curvature,
                    }
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    #[serde(rename = "J_E_J")]
    pub j_e: f64,
    /// Independent quadrature of `½EI∫κ²ds`.
    #[serde(rename = "J_E_quadrature_J")]
    pub j_e_quadrature: f64,
    pub lambda_per_m2: f64,
    #[serde(rename = "lambda_r_N")]
    pub lambda_r: f64,
    #[serde(rename = "H_star_N")]
    pub h_star: f64,
    pub kappa_max_per_m: f64,
}

pub fn cmd_energy(scene: &Scene, config: &Config) -> EnergyReport {
    let props = &scene.file.cable;
    let (params, phi_base) = match config {
        Config::Planar(c) => (c.params, c.phi_base),
        Config::Spatial(c) => (c.params, c.phi_base),
    };
    let d = derive(&params, phi_base, props);
    let shape = match config {
        Config::Planar(c) => CableShape::new(c, props.length),
        Config::Spatial(c) => CableShape::new(&c.in_plane(), props.length),
    };
    EnergyReport {
        j_e: elastic_energy(&params, props),
        j_e_quadrature: elastic_energy_quadrature(&params, props),
        lambda_per_m2: d.lambda,
        lambda_r: d.lambda_r,
        h_star: d.h_star,
        kappa_max_per_m: shape.kappa_max(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GravityReport {
    #[serde(rename = "J_E_J")]
    pub j_e: f64,
    #[serde(rename = "J_G_J")]
    pub j_g: f64,
    /// `J_G / J_E`; absent for a straight cable.
    pub ratio: Option<f64>,
    /// How heights are measured.
    pub datum: &'static str,
}

impl From<EnergyBreakdown> for GravityReport {
    fn from(b: EnergyBreakdown) -> Self {
        Self {
            j_e: b.j_e,
            j_g: b.j_g,
            ratio: b.ratio,
            datum: "height above the cable's lowest point; gravity along world -z",
        }
    }
}

/// A planar configuration lies in the horizontal x-y plane, so its
/// gravitational energy above the lowest point is zero.
pub fn cmd_gravity_ratio(props: &CableProperties, config: &Config) -> GravityReport {
    let c3 = match config {
        Config::Planar(c) => Config3D {
            x0: c.x0,
            y0: c.y0,
            z0: 0.0,
            phi_x: 0.0,
            phi_y: 0.0,
            phi_base: c.phi_base,
            params: c.params,
        },
        Config::Spatial(c) => *c,
    };
    gravity_ratio(&c3, props).into()
}

/// The zip-tie example at cable length `length`.
pub fn cmd_zip_tie(length: f64) -> Result<GravityReport, CliError> {
    if !(length.is_finite() && length > 0.0) {
        return Err(CliError::input(
            "E_CABLE",
            format!("length must be positive (got {length})"),
        ));
    }
    let (cfg, props) = zip_tie_example(length);
    Ok(gravity_ratio(&cfg, &props).into())
}

/// Desk-scale stability survey as CSV: `kind,k,s0_m,l_tilde_m,x_l_m,y_l_m,J_J,bin`.
pub fn cmd_survey_csv(length: f64) -> Result<String, CliError> {
    let props = CableProperties::new(length, 0.0027, 0.013, 9.81)
        .map_err(|e| CliError::input("E_CABLE", e.to_string()))?;
    let survey = stability_survey(&SurveySpec::desk_scale(length), &props);
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Output(e.to_string());
    w.write_record([
        "kind",
        "k",
        "s0_m",
        "l_tilde_m",
        "x_l_m",
        "y_l_m",
        "J_J",
        "bin",
    ])
    .map_err(io)?;
    for r in &survey.rows {
        w.write_record([
            match r.kind {
                elastica_steer::energy::ShapeKind::FullPeriod => "full_period".to_string(),
                elastica_steer::energy::ShapeKind::SubPeriod => "sub_period".to_string(),
            },
            r.k.to_string(),
            r.s0.to_string(),
            r.l_tilde.to_string(),
            r.x_l.to_string(),
            r.y_l.to_string(),
            r.j.to_string(),
            format!("{}:{}", r.bin.0, r.bin.1),
        ])
        .map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Output(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}
