//! Closed-form inflectional elastica: curvature, tangent, shape, costates
//! and the endpoint map `ψ`.
//!
//! A cable configuration is a base pose plus three shape parameters
//! `(k, s0, L̃)`. With `√λ = 4K(k)/L̃` and `u(s) = √λ·(s + s0)`:
//!
//! ```text
//! κ(s) = -2k√λ · cn(u(s), k)
//! φ(s) = φ₀ - 2·asin(k · sn(u(s), k)),   φ₀ = φ(0) + 2·asin(k · sn(√λ s0, k))
//! x̃(s) = (2/√λ)·(ε(u(s)) - ε(u(0))) - s
//! ỹ(s) = -(2k/√λ)·(cn(u(s)) - cn(u(0)))
//! ```
//!
//! and the world position is `p(0) + R(φ₀)·(x̃, ỹ)` where `R(φ₀)` is the
//! determinant `-1` matrix `[[cos φ₀, sin φ₀], [sin φ₀, -cos φ₀]]`.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, Vector2, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elliptic::{EllipticError, EllipticKernel, Modulus};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ElasticaError {
    #[error(transparent)]
    Modulus(#[from] EllipticError),
    #[error("full-period length must be positive and finite, got {0}")]
    Period(f64),
    #[error("{0} must be finite")]
    NonFinite(&'static str),
    #[error("cable property {name} = {value} is out of range")]
    Property { name: &'static str, value: f64 },
    #[error("arclength {s} outside [0, {length}]")]
    Arclength { s: f64, length: f64 },
}

/// Reduces an angle to `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    if a > -PI && a <= PI {
        return a;
    }
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Shape parameters `(k, s0, L̃)` of an inflectional elastica.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ElasticaParams {
    k: f64,
    s0: f64,
    l_tilde: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    k: f64,
    s0_m: f64,
    l_tilde_m: f64,
}

impl TryFrom<RawParams> for ElasticaParams {
    type Error = ElasticaError;
    fn try_from(r: RawParams) -> Result<Self, Self::Error> {
        Self::new(r.k, r.s0_m, r.l_tilde_m)
    }
}

impl From<ElasticaParams> for RawParams {
    fn from(p: ElasticaParams) -> Self {
        Self {
            k: p.k,
            s0_m: p.s0,
            l_tilde_m: p.l_tilde,
        }
    }
}

impl ElasticaParams {
    /// Validates the parameters; `s0` is stored reduced modulo `L̃`.
    pub fn new(k: f64, s0: f64, l_tilde: f64) -> Result<Self, ElasticaError> {
        Modulus::new(k)?;
        if !(l_tilde.is_finite() && l_tilde > 0.0) {
            return Err(ElasticaError::Period(l_tilde));
        }
        if !s0.is_finite() {
            return Err(ElasticaError::NonFinite("s0"));
        }
        let mut s0 = s0.rem_euclid(l_tilde);
        if s0 >= l_tilde {
            s0 = 0.0;
        }
        Ok(Self { k, s0, l_tilde })
    }

    /// Builds parameters from the gridded modulus coordinate `σ = 1 - 2k²`.
    pub fn from_sigma(sigma: f64, s0: f64, l_tilde: f64) -> Result<Self, ElasticaError> {
        Self::new(k_from_sigma(sigma), s0, l_tilde)
    }

    #[inline]
    pub fn k(&self) -> f64 {
        self.k
    }

    #[inline]
    pub fn s0(&self) -> f64 {
        self.s0
    }

    #[inline]
    pub fn l_tilde(&self) -> f64 {
        self.l_tilde
    }

    #[inline]
    pub fn sigma(&self) -> f64 {
        1.0 - 2.0 * self.k * self.k
    }

    pub fn modulus(&self) -> Modulus {
        Modulus::new(self.k).expect("validated at construction")
    }
}

/// `k = sqrt((1 - σ)/2)`; rounding noise just above `σ = 1` maps to `k = 0`.
pub fn k_from_sigma(sigma: f64) -> f64 {
    (0.5 * (1.0 - sigma)).max(0.0).sqrt()
}

/// Physical cable constants (SI units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CableProperties {
    /// Cable length `L` (m).
    #[serde(rename = "L_m")]
    pub length: f64,
    /// Bending stiffness `EI` (N·m²).
    #[serde(rename = "EI_Nm2")]
    pub ei: f64,
    /// Linear mass density `ρ` (kg/m).
    #[serde(rename = "rho_kg_per_m", default)]
    pub rho: f64,
    /// Gravitational acceleration (m/s²).
    #[serde(rename = "g_m_per_s2", default = "default_gravity")]
    pub g: f64,
}

fn default_gravity() -> f64 {
    9.81
}

impl CableProperties {
    pub fn new(length: f64, ei: f64, rho: f64, g: f64) -> Result<Self, ElasticaError> {
        let props = Self { length, ei, rho, g };
        props.validate()?;
        Ok(props)
    }

    pub fn validate(&self) -> Result<(), ElasticaError> {
        let check = |name, value: f64, ok: bool| {
            if value.is_finite() && ok {
                Ok(())
            } else {
                Err(ElasticaError::Property { name, value })
            }
        };
        check("L", self.length, self.length > 0.0)?;
        check("EI", self.ei, self.ei > 0.0)?;
        check("rho", self.rho, self.rho >= 0.0)?;
        check("g", self.g, self.g >= 0.0)
    }
}

/// Planar configuration `(x0, y0, φ(0), k, s0, L̃)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config2D {
    pub x0: f64,
    pub y0: f64,
    pub phi_base: f64,
    pub params: ElasticaParams,
}

impl Config2D {
    pub fn new(
        x0: f64,
        y0: f64,
        phi_base: f64,
        params: ElasticaParams,
    ) -> Result<Self, ElasticaError> {
        for (name, v) in [("x0", x0), ("y0", y0), ("phi_base", phi_base)] {
            if !v.is_finite() {
                return Err(ElasticaError::NonFinite(name));
            }
        }
        Ok(Self {
            x0,
            y0,
            phi_base: wrap_angle(phi_base),
            params,
        })
    }

    pub fn base(&self) -> Vector2<f64> {
        Vector2::new(self.x0, self.y0)
    }
}

/// Semi-spatial configuration: a planar elastica whose deformation plane
/// is placed in space by `R_x(φ_x)·R_y(φ_y)` and the base position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config3D {
    pub x0: f64,
    pub y0: f64,
    pub z0: f64,
    pub phi_x: f64,
    pub phi_y: f64,
    pub phi_base: f64,
    pub params: ElasticaParams,
}

impl Config3D {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        x0: f64,
        y0: f64,
        z0: f64,
        phi_x: f64,
        phi_y: f64,
        phi_base: f64,
        params: ElasticaParams,
    ) -> Result<Self, ElasticaError> {
        for (name, v) in [
            ("x0", x0),
            ("y0", y0),
            ("z0", z0),
            ("phi_x", phi_x),
            ("phi_y", phi_y),
            ("phi_base", phi_base),
        ] {
            if !v.is_finite() {
                return Err(ElasticaError::NonFinite(name));
            }
        }
        Ok(Self {
            x0,
            y0,
            z0,
            phi_x: wrap_angle(phi_x),
            phi_y: wrap_angle(phi_y),
            phi_base: wrap_angle(phi_base),
            params,
        })
    }

    pub fn base(&self) -> Vector3<f64> {
        Vector3::new(self.x0, self.y0, self.z0)
    }

    /// The same elastica expressed in its own deformation plane, with the
    /// base at the plane origin.
    pub fn in_plane(&self) -> Config2D {
        Config2D {
            x0: 0.0,
            y0: 0.0,
            phi_base: self.phi_base,
            params: self.params,
        }
    }

    pub fn plane(&self) -> PlaneFrame {
        PlaneFrame::new(self.base(), self.phi_x, self.phi_y)
    }
}

/// Either a planar (6-D) or semi-spatial (9-D) configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Config {
    Planar(Config2D),
    Spatial(Config3D),
}

impl Config {
    pub fn params(&self) -> &ElasticaParams {
        match self {
            Config::Planar(c) => &c.params,
            Config::Spatial(c) => &c.params,
        }
    }

    pub fn psi(&self, length: f64) -> GripState {
        match self {
            Config::Planar(c) => GripState::Planar(psi_2d(c, length)),
            Config::Spatial(c) => GripState::Spatial(psi_3d(c, length)),
        }
    }
}

/// Rigid placement of a deformation plane in space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneFrame {
    pub origin: Vector3<f64>,
    /// `R_x(φ_x)·R_y(φ_y)`; columns are the in-plane axes and the normal.
    pub rotation: Matrix3<f64>,
}

pub fn rot_x(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

pub fn rot_y(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

impl PlaneFrame {
    pub fn new(origin: Vector3<f64>, phi_x: f64, phi_y: f64) -> Self {
        Self {
            origin,
            rotation: rot_x(phi_x) * rot_y(phi_y),
        }
    }

    pub fn axis_u(&self) -> Vector3<f64> {
        self.rotation.column(0).into()
    }

    pub fn axis_v(&self) -> Vector3<f64> {
        self.rotation.column(1).into()
    }

    pub fn normal(&self) -> Vector3<f64> {
        self.rotation.column(2).into()
    }

    pub fn to_world(&self, p: Vector2<f64>) -> Vector3<f64> {
        self.origin + self.rotation * Vector3::new(p.x, p.y, 0.0)
    }

    pub fn direction_to_world(&self, d: Vector2<f64>) -> Vector3<f64> {
        self.rotation * Vector3::new(d.x, d.y, 0.0)
    }

    /// In-plane coordinates of `p` and its signed distance from the plane.
    pub fn to_plane(&self, p: Vector3<f64>) -> (Vector2<f64>, f64) {
        let local = self.rotation.transpose() * (p - self.origin);
        (Vector2::new(local.x, local.y), local.z)
    }
}

/// Quantities derived from the shape parameters and the stiffness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedElastica {
    /// `λ = (4K(k)/L̃)²` (1/m²).
    pub lambda: f64,
    /// Internal force magnitude `λ_r = EI·λ` (N).
    pub lambda_r: f64,
    /// Direction of the elastica axis `φ₀` (rad).
    pub phi0_axis: f64,
    /// `σ = 1 - 2k²`.
    pub sigma: f64,
    /// Hamiltonian constant `H* = EI·λ·σ` (N).
    pub h_star: f64,
}

pub fn derive(params: &ElasticaParams, phi_base: f64, props: &CableProperties) -> DerivedElastica {
    let kernel = EllipticKernel::new(params.modulus());
    let sqrt_lambda = 4.0 * kernel.complete_k() / params.l_tilde();
    let lambda = sqrt_lambda * sqrt_lambda;
    let sn0 = kernel.jacobi(sqrt_lambda * params.s0()).sn;
    let sigma = params.sigma();
    DerivedElastica {
        lambda,
        lambda_r: props.ei * lambda,
        phi0_axis: phi_base + 2.0 * (params.k() * sn0).asin(),
        sigma,
        h_star: props.ei * lambda * sigma,
    }
}

/// A sampled point of the cable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CablePoint<V> {
    pub s: f64,
    pub position: V,
    /// In-plane tangent angle `φ(s)` in `(-π, π]`.
    pub tangent_angle: f64,
    pub curvature: f64,
}

/// Evaluator for one elastica curve in its deformation plane.
///
/// Holds the AGM sequence and the `s = 0` reference values so that
/// repeated evaluation along the cable costs one Landen recursion each.
#[derive(Debug, Clone)]
pub struct CableShape {
    kernel: EllipticKernel,
    k: f64,
    sqrt_lambda: f64,
    u0: f64,
    eps0: f64,
    cn0: f64,
    phi0_axis: f64,
    cos_axis: f64,
    sin_axis: f64,
    base: Vector2<f64>,
    length: f64,
}

impl CableShape {
    pub fn new(config: &Config2D, length: f64) -> Self {
        let params = &config.params;
        let kernel = EllipticKernel::new(params.modulus());
        let sqrt_lambda = 4.0 * kernel.complete_k() / params.l_tilde();
        let u0 = sqrt_lambda * params.s0();
        let (j0, eps0) = kernel.evaluate(u0);
        let phi0_axis = config.phi_base + 2.0 * (params.k() * j0.sn).asin();
        let (sin_axis, cos_axis) = phi0_axis.sin_cos();
        Self {
            k: params.k(),
            kernel,
            sqrt_lambda,
            u0,
            eps0,
            cn0: j0.cn,
            phi0_axis,
            cos_axis,
            sin_axis,
            base: config.base(),
            length,
        }
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.length
    }

    #[inline]
    pub fn sqrt_lambda(&self) -> f64 {
        self.sqrt_lambda
    }

    #[inline]
    pub fn phi0_axis(&self) -> f64 {
        self.phi0_axis
    }

    /// Upper bound `2k√λ` on `|κ(s)|`.
    #[inline]
    pub fn kappa_max(&self) -> f64 {
        2.0 * self.k * self.sqrt_lambda
    }

    /// Local-frame coordinates `(x̃, ỹ)` before rotation and translation.
    pub fn local(&self, s: f64) -> Vector2<f64> {
        let (j, eps) = self.kernel.evaluate(self.sqrt_lambda * s + self.u0);
        self.local_from(s, j.cn, eps)
    }

    fn local_from(&self, s: f64, cn: f64, eps: f64) -> Vector2<f64> {
        let inv = 1.0 / self.sqrt_lambda;
        Vector2::new(
            2.0 * inv * (eps - self.eps0) - s,
            -2.0 * self.k * inv * (cn - self.cn0),
        )
    }

    fn to_world(&self, local: Vector2<f64>) -> Vector2<f64> {
        self.base
            + Vector2::new(
                self.cos_axis * local.x + self.sin_axis * local.y,
                self.sin_axis * local.x - self.cos_axis * local.y,
            )
    }

    pub fn position(&self, s: f64) -> Vector2<f64> {
        self.to_world(self.local(s))
    }

    pub fn curvature(&self, s: f64) -> f64 {
        -2.0 * self.k * self.sqrt_lambda * self.kernel.jacobi(self.sqrt_lambda * s + self.u0).cn
    }

    /// Tangent angle, continuous in `s` (not wrapped).
    pub fn tangent_angle(&self, s: f64) -> f64 {
        let sn = self.kernel.jacobi(self.sqrt_lambda * s + self.u0).sn;
        self.phi0_axis - 2.0 * (self.k * sn).asin()
    }

    pub fn point(&self, s: f64) -> CablePoint<Vector2<f64>> {
        let (j, eps) = self.kernel.evaluate(self.sqrt_lambda * s + self.u0);
        CablePoint {
            s,
            position: self.to_world(self.local_from(s, j.cn, eps)),
            tangent_angle: wrap_angle(self.phi0_axis - 2.0 * (self.k * j.sn).asin()),
            curvature: -2.0 * self.k * self.sqrt_lambda * j.cn,
        }
    }

    /// Position and unwrapped tangent angle together.
    pub fn pose(&self, s: f64) -> (Vector2<f64>, f64) {
        let (j, eps) = self.kernel.evaluate(self.sqrt_lambda * s + self.u0);
        (
            self.to_world(self.local_from(s, j.cn, eps)),
            self.phi0_axis - 2.0 * (self.k * j.sn).asin(),
        )
    }
}

/// Accepts `[0, L]` plus a few ulps of rounding on either side.
fn check_arclength(s: f64, length: f64) -> Result<(), ElasticaError> {
    let slack = 4.0 * f64::EPSILON * length;
    if (-slack..=length + slack).contains(&s) {
        Ok(())
    } else {
        Err(ElasticaError::Arclength { s, length })
    }
}

pub fn curvature(
    s: f64,
    params: &ElasticaParams,
    props: &CableProperties,
) -> Result<f64, ElasticaError> {
    check_arclength(s, props.length)?;
    let cfg = Config2D {
        x0: 0.0,
        y0: 0.0,
        phi_base: 0.0,
        params: *params,
    };
    Ok(CableShape::new(&cfg, props.length).curvature(s))
}

/// Tangent angle `φ(s)` in `(-π, π]`.
pub fn tangent(s: f64, config: &Config2D, length: f64) -> Result<f64, ElasticaError> {
    check_arclength(s, length)?;
    Ok(wrap_angle(CableShape::new(config, length).tangent_angle(s)))
}

pub fn shape_local(
    s: f64,
    params: &ElasticaParams,
    length: f64,
) -> Result<Vector2<f64>, ElasticaError> {
    check_arclength(s, length)?;
    let cfg = Config2D {
        x0: 0.0,
        y0: 0.0,
        phi_base: 0.0,
        params: *params,
    };
    Ok(CableShape::new(&cfg, length).local(s))
}

pub fn shape_world_2d(
    config: &Config2D,
    s: f64,
    length: f64,
) -> Result<CablePoint<Vector2<f64>>, ElasticaError> {
    check_arclength(s, length)?;
    Ok(CableShape::new(config, length).point(s))
}

pub fn shape_world_3d(
    config: &Config3D,
    s: f64,
    length: f64,
) -> Result<CablePoint<Vector3<f64>>, ElasticaError> {
    check_arclength(s, length)?;
    Ok(SpatialShape::new(config, length).point(s))
}

/// Evaluator for a semi-spatial configuration.
#[derive(Debug, Clone)]
pub struct SpatialShape {
    planar: CableShape,
    frame: PlaneFrame,
}

impl SpatialShape {
    pub fn new(config: &Config3D, length: f64) -> Self {
        Self {
            planar: CableShape::new(&config.in_plane(), length),
            frame: config.plane(),
        }
    }

    pub fn planar(&self) -> &CableShape {
        &self.planar
    }

    pub fn frame(&self) -> &PlaneFrame {
        &self.frame
    }

    pub fn position(&self, s: f64) -> Vector3<f64> {
        self.frame.to_world(self.planar.position(s))
    }

    pub fn tangent(&self, s: f64) -> Vector3<f64> {
        let phi = self.planar.tangent_angle(s);
        self.frame
            .direction_to_world(Vector2::new(phi.cos(), phi.sin()))
    }

    pub fn point(&self, s: f64) -> CablePoint<Vector3<f64>> {
        let p = self.planar.point(s);
        CablePoint {
            s,
            position: self.frame.to_world(p.position),
            tangent_angle: p.tangent_angle,
            curvature: p.curvature,
        }
    }
}

/// Gripper poses in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarGrip {
    pub p0: [f64; 2],
    pub phi0: f64,
    pub p_l: [f64; 2],
    pub phi_l: f64,
}

/// Gripper poses in space; tangents are unit vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpatialGrip {
    pub p0: [f64; 3],
    pub t0: [f64; 3],
    pub p_l: [f64; 3],
    pub t_l: [f64; 3],
}

/// Endpoint positions and tangents of both hands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GripState {
    Planar(PlanarGrip),
    Spatial(SpatialGrip),
}

impl GripState {
    /// Straight-line distance between the two grip positions.
    pub fn separation(&self) -> f64 {
        match self {
            GripState::Planar(g) => (Vector2::from(g.p_l) - Vector2::from(g.p0)).norm(),
            GripState::Spatial(g) => (Vector3::from(g.p_l) - Vector3::from(g.p0)).norm(),
        }
    }

    /// Euclidean distance between two grip states. Angular components are
    /// multiplied by `angle_scale` (m/rad); planar angle differences are
    /// wrapped to `(-π, π]` first.
    ///
    /// # Panics
    /// If the two states are of different dimension.
    pub fn distance(&self, other: &GripState, angle_scale: f64) -> f64 {
        match (self, other) {
            (GripState::Planar(a), GripState::Planar(b)) => {
                let d0 = Vector2::from(a.p0) - Vector2::from(b.p0);
                let dl = Vector2::from(a.p_l) - Vector2::from(b.p_l);
                let a0 = angle_scale * wrap_angle(a.phi0 - b.phi0);
                let al = angle_scale * wrap_angle(a.phi_l - b.phi_l);
                (d0.norm_squared() + dl.norm_squared() + a0 * a0 + al * al).sqrt()
            }
            (GripState::Spatial(a), GripState::Spatial(b)) => {
                let d0 = Vector3::from(a.p0) - Vector3::from(b.p0);
                let dl = Vector3::from(a.p_l) - Vector3::from(b.p_l);
                let t0 = angle_scale * (Vector3::from(a.t0) - Vector3::from(b.t0));
                let tl = angle_scale * (Vector3::from(a.t_l) - Vector3::from(b.t_l));
                (d0.norm_squared() + dl.norm_squared() + t0.norm_squared() + tl.norm_squared())
                    .sqrt()
            }
            _ => panic!("grip states of different dimension"),
        }
    }

    /// Both grip positions, lifted to 3-D (planar states get `z = 0`).
    pub fn positions(&self) -> [Vector3<f64>; 2] {
        match self {
            GripState::Planar(g) => [
                Vector3::new(g.p0[0], g.p0[1], 0.0),
                Vector3::new(g.p_l[0], g.p_l[1], 0.0),
            ],
            GripState::Spatial(g) => [Vector3::from(g.p0), Vector3::from(g.p_l)],
        }
    }
}

pub fn psi_2d(config: &Config2D, length: f64) -> PlanarGrip {
    let shape = CableShape::new(config, length);
    let end = shape.point(length);
    PlanarGrip {
        p0: [config.x0, config.y0],
        phi0: config.phi_base,
        p_l: end.position.into(),
        phi_l: end.tangent_angle,
    }
}

pub fn psi_3d(config: &Config3D, length: f64) -> SpatialGrip {
    let shape = SpatialShape::new(config, length);
    SpatialGrip {
        p0: config.base().into(),
        t0: shape.tangent(0.0).into(),
        p_l: shape.position(length).into(),
        t_l: shape.tangent(length).into(),
    }
}

/// Costates along the cable: the constant force components and the
/// bending moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Costates {
    pub lambda_x: f64,
    pub lambda_y: f64,
    pub lambda_phi: f64,
}

pub fn costates(
    config: &Config2D,
    props: &CableProperties,
    s: f64,
) -> Result<Costates, ElasticaError> {
    check_arclength(s, props.length)?;
    let shape = CableShape::new(config, props.length);
    let lambda_r = props.ei * shape.sqrt_lambda * shape.sqrt_lambda;
    Ok(Costates {
        lambda_x: lambda_r * shape.cos_axis,
        lambda_y: lambda_r * shape.sin_axis,
        lambda_phi: -props.ei * shape.curvature(s),
    })
}

/// `H(s) = λx·cos φ + λy·sin φ + λφ·κ + ½EI·κ²`; constant along an
/// extremal and equal to `EI·λ·σ`.
pub fn hamiltonian(
    config: &Config2D,
    props: &CableProperties,
    s: f64,
) -> Result<f64, ElasticaError> {
    let c = costates(config, props, s)?;
    let shape = CableShape::new(config, props.length);
    let (_, phi) = shape.pose(s);
    let kappa = shape.curvature(s);
    Ok(c.lambda_x * phi.cos()
        + c.lambda_y * phi.sin()
        + c.lambda_phi * kappa
        + 0.5 * props.ei * kappa * kappa)
}
