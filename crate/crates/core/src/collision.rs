//! Cable-versus-obstacle checks.
//!
//! The planar check runs in four stages: the cable is split into convex
//! arcs, each arc gets a bounding triangle, obstacle pieces that miss every
//! triangle are discarded, and the survivors are clipped to the triangle
//! and tested against the arc itself by adaptive flattening. Spatial
//! checks slice each obstacle with the deformation plane and reuse the
//! planar machinery.

use nalgebra::{Vector2, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elastica::{CableShape, Config2D, Config3D};
use crate::geometry::{
    bounding_triangles_of, clip, convex_distance, convex_overlap, signed_area, BoundingTriangle,
    ConvexPiece,
};
use crate::predicates::{cross, point_segment_distance, P2};

/// Flattening stops once the sagitta bound drops below this (m).
pub const DEFAULT_SAGITTA_TOL: f64 = 1e-6;

/// Outward polygonization error allowed for curved obstacles (m).
pub const SLICE_HAUSDORFF: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionOptions {
    /// Cable radius; the arc is thickened by this much.
    pub inflation: f64,
    pub sagitta_tol: f64,
    /// Discard pieces that miss an arc's bounding triangle before clipping.
    pub pruning: bool,
}

impl Default for CollisionOptions {
    fn default() -> Self {
        Self {
            inflation: 0.0,
            sagitta_tol: DEFAULT_SAGITTA_TOL,
            pruning: true,
        }
    }
}

/// First contact along the cable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness<V> {
    pub s: f64,
    pub obstacle: usize,
    pub point: V,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionReport<V> {
    pub witness: Option<Witness<V>>,
}

impl<V> CollisionReport<V> {
    pub fn clear() -> Self {
        Self { witness: None }
    }

    pub fn colliding(&self) -> bool {
        self.witness.is_some()
    }
}

pub type Report2D = CollisionReport<[f64; 2]>;
pub type Report3D = CollisionReport<[f64; 3]>;

/// Checks a planar cable against convex pieces; witness `obstacle` is the
/// piece index.
pub fn collides_2d(config: &Config2D, length: f64, pieces: &[ConvexPiece]) -> Report2D {
    collides_2d_with(config, length, pieces, &CollisionOptions::default())
}

pub fn collides_2d_with(
    config: &Config2D,
    length: f64,
    pieces: &[ConvexPiece],
    opts: &CollisionOptions,
) -> Report2D {
    let ids: Vec<usize> = (0..pieces.len()).collect();
    collides_2d_tagged(config, length, pieces, &ids, opts)
}

/// Like [`collides_2d_with`], reporting `ids[i]` for a hit on `pieces[i]`
/// (several pieces may share an owning polygon).
pub fn collides_2d_tagged(
    config: &Config2D,
    length: f64,
    pieces: &[ConvexPiece],
    ids: &[usize],
    opts: &CollisionOptions,
) -> Report2D {
    assert_eq!(pieces.len(), ids.len());
    if pieces.is_empty() {
        return CollisionReport::clear();
    }
    let shape = CableShape::new(config, length);
    let triangles = bounding_triangles_of(&shape, config);
    for tri in &triangles {
        let tri_pts = tri.ccw_vertices();
        let mut best: Option<(f64, P2, usize)> = None;
        for (piece, &id) in pieces.iter().zip(ids) {
            if opts.pruning && !stage_three(&tri_pts, piece, opts.inflation) {
                continue;
            }
            if let Some((s, p)) = stage_four(&shape, tri, piece, opts) {
                if best.is_none_or(|(bs, _, _)| s < bs) {
                    best = Some((s, p, id));
                }
            }
        }
        if let Some((s, p, obstacle)) = best {
            return CollisionReport {
                witness: Some(Witness {
                    s,
                    obstacle,
                    point: [p.x, p.y],
                }),
            };
        }
    }
    CollisionReport::clear()
}

fn stage_three(tri: &[P2], piece: &ConvexPiece, inflation: f64) -> bool {
    if inflation > 0.0 {
        convex_distance(tri, piece.vertices()) <= inflation
    } else {
        convex_overlap(tri, piece.vertices())
    }
}

fn stage_four(
    shape: &CableShape,
    tri: &BoundingTriangle,
    piece: &ConvexPiece,
    opts: &CollisionOptions,
) -> Option<(f64, P2)> {
    if tri.degenerate || opts.inflation > 0.0 {
        return arc_hits(shape, (tri.s_start, tri.s_end), piece.vertices(), opts);
    }
    let clipped = clip(piece, tri)?;
    arc_hits(shape, (tri.s_start, tri.s_end), clipped.vertices(), opts)
}

/// Whether the cable arc over `s_range` meets `region`, returning the
/// first contact `(s, point)`. The arc must be convex (no inflection or
/// curvature extremum inside the range).
pub fn arc_region_intersects(
    config: &Config2D,
    length: f64,
    s_range: (f64, f64),
    region: &ConvexPiece,
    opts: &CollisionOptions,
) -> Option<(f64, P2)> {
    let shape = CableShape::new(config, length);
    arc_hits(&shape, s_range, region.vertices(), opts)
}

fn arc_hits(
    shape: &CableShape,
    (sa, sb): (f64, f64),
    region: &[P2],
    opts: &CollisionOptions,
) -> Option<(f64, P2)> {
    if region.len() >= 3 && signed_area(region) <= 0.0 {
        return None;
    }
    let flat = Flattener {
        shape,
        region,
        kappa_max: shape.kappa_max(),
        inflation: opts.inflation,
        tol: opts.sagitta_tol,
    };
    flat.recurse(sa, sb, shape.pose(sa), shape.pose(sb), 0)
}

struct Flattener<'a> {
    shape: &'a CableShape,
    region: &'a [P2],
    kappa_max: f64,
    inflation: f64,
    tol: f64,
}

const MAX_DEPTH: u32 = 60;

impl Flattener<'_> {
    fn recurse(
        &self,
        sa: f64,
        sb: f64,
        a: (P2, f64),
        b: (P2, f64),
        depth: u32,
    ) -> Option<(f64, P2)> {
        let ds = sb - sa;
        let sagitta = self.kappa_max * ds * ds / 8.0;
        if sagitta < self.tol || depth >= MAX_DEPTH {
            return self.leaf(sa, sb, a.0, b.0, sagitta);
        }
        let tri = BoundingTriangle::from_poses((sa, sb), a, b);
        let slack = if tri.degenerate { sagitta } else { 0.0 };
        if convex_distance(&tri.ccw_vertices(), self.region) > self.inflation + slack {
            return None;
        }
        let sm = 0.5 * (sa + sb);
        let m = self.shape.pose(sm);
        self.recurse(sa, sm, a, m, depth + 1)
            .or_else(|| self.recurse(sm, sb, m, b, depth + 1))
    }

    fn leaf(&self, sa: f64, sb: f64, pa: P2, pb: P2, sagitta: f64) -> Option<(f64, P2)> {
        let chord = [pa, pb];
        if convex_distance(&chord, self.region) > sagitta + self.inflation {
            return None;
        }
        let t = entry_parameter(&pa, &pb, self.region)
            .unwrap_or_else(|| closest_parameter(&pa, &pb, self.region));
        let s = sa + t * (sb - sa);
        Some((s, self.shape.position(s)))
    }
}

/// Parameter where the segment `p → q` enters a counterclockwise convex
/// region (Cyrus–Beck), if it does.
fn entry_parameter(p: &P2, q: &P2, region: &[P2]) -> Option<f64> {
    let n = region.len();
    if n < 3 {
        return None;
    }
    let d = q - p;
    let (mut t0, mut t1) = (0.0_f64, 1.0_f64);
    for i in 0..n {
        let a = region[i];
        let e = region[(i + 1) % n] - a;
        // inside: cross(e, x - a) >= 0
        let f0 = cross(&e, &(p - a));
        let df = cross(&e, &d);
        if df == 0.0 {
            if f0 < 0.0 {
                return None;
            }
        } else {
            let t = -f0 / df;
            if df > 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
        }
        if t0 > t1 {
            return None;
        }
    }
    Some(t0)
}

fn closest_parameter(p: &P2, q: &P2, region: &[P2]) -> f64 {
    let mut best = (f64::INFINITY, 0.0);
    let mut consider = |t: f64| {
        let x = p + (q - p) * t;
        let d = convex_distance(&[x], region);
        if d < best.0 {
            best = (d, t);
        }
    };
    consider(0.0);
    consider(1.0);
    for v in region {
        consider(point_segment_distance(v, p, q).1);
    }
    best.1
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObstacleError {
    #[error("{0} must be positive and finite (got {1})")]
    NonPositive(&'static str, f64),
    #[error("cylinder axis must be a nonzero finite vector")]
    Axis,
    #[error("polyhedron needs at least 4 non-coplanar vertices")]
    Degenerate,
    #[error("polyhedron vertex {0} is not finite")]
    NonFinite(usize),
    #[error("polyhedron vertex {0} is not an extreme point of the hull")]
    NotConvex(usize),
}

/// Obstacle for semi-spatial scenes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Obstacle3D {
    Cylinder {
        #[serde(rename = "base_center_m")]
        base_center: [f64; 3],
        axis: [f64; 3],
        #[serde(rename = "radius_m")]
        radius: f64,
        #[serde(rename = "height_m")]
        height: f64,
    },
    /// Convex hull of the listed vertices.
    Polyhedron {
        #[serde(rename = "vertices_m")]
        vertices: Vec<[f64; 3]>,
    },
}

const FACE_SLACK: f64 = 1e-9;

impl Obstacle3D {
    pub fn cylinder(
        base_center: [f64; 3],
        axis: [f64; 3],
        radius: f64,
        height: f64,
    ) -> Result<Self, ObstacleError> {
        let c = Obstacle3D::Cylinder {
            base_center,
            axis,
            radius,
            height,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn polyhedron(vertices: Vec<[f64; 3]>) -> Result<Self, ObstacleError> {
        let p = Obstacle3D::Polyhedron { vertices };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ObstacleError> {
        match self {
            Obstacle3D::Cylinder {
                base_center,
                axis,
                radius,
                height,
            } => {
                for (name, v) in [("radius", *radius), ("height", *height)] {
                    if !(v.is_finite() && v > 0.0) {
                        return Err(ObstacleError::NonPositive(name, v));
                    }
                }
                let a = Vector3::from(*axis);
                if !(a.iter().all(|x| x.is_finite()) && a.norm() > 0.0)
                    || !base_center.iter().all(|x| x.is_finite())
                {
                    return Err(ObstacleError::Axis);
                }
                Ok(())
            }
            Obstacle3D::Polyhedron { vertices } => validate_polyhedron(vertices),
        }
    }

    /// Cross-section with the plane of `frame`, as a convex polygon in
    /// plane coordinates; `None` if the slice has no area. Cylinders are
    /// replaced by a circumscribed prism, so the slice errs outward.
    pub fn slice(&self, frame: &crate::elastica::PlaneFrame, extent: f64) -> Option<ConvexPiece> {
        match self {
            Obstacle3D::Cylinder {
                base_center,
                axis,
                radius,
                height,
            } => slice_cylinder(
                frame,
                extent,
                Vector3::from(*base_center),
                Vector3::from(*axis).normalize(),
                *radius,
                *height,
            ),
            Obstacle3D::Polyhedron { vertices } => slice_polyhedron(frame, vertices),
        }
    }
}

fn validate_polyhedron(vertices: &[[f64; 3]]) -> Result<(), ObstacleError> {
    if let Some(i) = vertices
        .iter()
        .position(|v| !v.iter().all(|x| x.is_finite()))
    {
        return Err(ObstacleError::NonFinite(i));
    }
    let v: Vec<Vector3<f64>> = vertices.iter().map(|p| Vector3::from(*p)).collect();
    let n = v.len();
    if n < 4 {
        return Err(ObstacleError::Degenerate);
    }
    let scale = v.iter().map(|p| p.norm()).fold(1.0, f64::max);
    let mut on_face = vec![false; n];
    let mut any_face = false;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let normal = (v[j] - v[i]).cross(&(v[k] - v[i]));
                let norm = normal.norm();
                if norm <= 1e-12 * scale * scale {
                    continue;
                }
                let nrm = normal / norm;
                let side: Vec<f64> = v.iter().map(|p| nrm.dot(&(p - v[i]))).collect();
                let slack = FACE_SLACK * scale;
                let above = side.iter().any(|&d| d > slack);
                let below = side.iter().any(|&d| d < -slack);
                if above && below {
                    continue;
                }
                if !above && !below {
                    return Err(ObstacleError::Degenerate);
                }
                any_face = true;
                for (m, &d) in side.iter().enumerate() {
                    if d.abs() <= slack {
                        on_face[m] = true;
                    }
                }
            }
        }
    }
    if !any_face {
        return Err(ObstacleError::Degenerate);
    }
    match on_face.iter().position(|&f| !f) {
        Some(i) => Err(ObstacleError::NotConvex(i)),
        None => Ok(()),
    }
}

/// Side count of a circumscribed prism whose outward error stays within
/// [`SLICE_HAUSDORFF`].
pub fn prism_sides(radius: f64) -> usize {
    let half_angle = (1.0 / (1.0 + SLICE_HAUSDORFF / radius)).acos();
    ((std::f64::consts::PI / half_angle).ceil() as usize).max(8)
}

fn perpendicular_basis(a: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let helper = if a.x.abs() <= a.y.abs() && a.x.abs() <= a.z.abs() {
        Vector3::x()
    } else if a.y.abs() <= a.z.abs() {
        Vector3::y()
    } else {
        Vector3::z()
    };
    let e1 = a.cross(&helper).normalize();
    let e2 = a.cross(&e1);
    (e1, e2)
}

fn slice_cylinder(
    frame: &crate::elastica::PlaneFrame,
    extent: f64,
    center: Vector3<f64>,
    axis: Vector3<f64>,
    radius: f64,
    height: f64,
) -> Option<ConvexPiece> {
    let n = prism_sides(radius);
    let (e1, e2) = perpendicular_basis(&axis);
    // Half-spaces nrm·p ≤ b in world coordinates.
    let mut planes: Vec<(Vector3<f64>, f64)> = Vec::with_capacity(n + 2);
    for i in 0..n {
        let th = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
        let d = e1 * th.cos() + e2 * th.sin();
        // faces are tangent to the circle
        planes.push((d, d.dot(&center) + radius));
    }
    planes.push((axis, axis.dot(&center) + height));
    planes.push((-axis, -axis.dot(&center)));
    let half = extent;
    let mut poly: Vec<P2> = vec![
        Vector2::new(-half, -half),
        Vector2::new(half, -half),
        Vector2::new(half, half),
        Vector2::new(-half, half),
    ];
    let (u, v, o) = (frame.axis_u(), frame.axis_v(), frame.origin);
    for (nrm, b) in planes {
        let a2 = Vector2::new(nrm.dot(&u), nrm.dot(&v));
        let rhs = b - nrm.dot(&o);
        poly = clip_halfplane(&poly, &a2, rhs);
        if poly.len() < 3 {
            return None;
        }
    }
    (signed_area(&poly) > 0.0)
        .then(|| ConvexPiece::new(poly).ok())
        .flatten()
}

/// Keeps the part of a convex polygon with `a·x ≤ b`.
fn clip_halfplane(poly: &[P2], a: &P2, b: f64) -> Vec<P2> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let cur = poly[i];
        let next = poly[(i + 1) % n];
        let fc = a.dot(&cur) - b;
        let fn_ = a.dot(&next) - b;
        if fc <= 0.0 {
            out.push(cur);
        }
        if (fc < 0.0 && fn_ > 0.0) || (fc > 0.0 && fn_ < 0.0) {
            let t = fc / (fc - fn_);
            out.push(cur + (next - cur) * t);
        }
    }
    out.dedup();
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

fn slice_polyhedron(
    frame: &crate::elastica::PlaneFrame,
    vertices: &[[f64; 3]],
) -> Option<ConvexPiece> {
    let local: Vec<(P2, f64)> = vertices
        .iter()
        .map(|p| frame.to_plane(Vector3::from(*p)))
        .collect();
    let mut pts = Vec::new();
    for (i, &(pi, wi)) in local.iter().enumerate() {
        if wi == 0.0 {
            pts.push(pi);
        }
        for &(pj, wj) in &local[i + 1..] {
            if (wi < 0.0 && wj > 0.0) || (wi > 0.0 && wj < 0.0) {
                let t = wi / (wi - wj);
                pts.push(pi + (pj - pi) * t);
            }
        }
    }
    ConvexPiece::hull_of(&pts)
}

/// Plane-coordinate cross-sections of spatial obstacles for one plane,
/// with the index of the obstacle each came from.
pub fn slice_obstacles(
    config: &Config3D,
    length: f64,
    obstacles: &[Obstacle3D],
) -> (Vec<ConvexPiece>, Vec<usize>) {
    let frame = config.plane();
    // The cable never leaves the disc of radius L around its base.
    let extent = 2.0 * length + 1.0;
    let mut pieces = Vec::new();
    let mut ids = Vec::new();
    for (i, ob) in obstacles.iter().enumerate() {
        if let Some(p) = ob.slice(&frame, extent) {
            pieces.push(p);
            ids.push(i);
        }
    }
    (pieces, ids)
}

pub fn collides_3d(config: &Config3D, length: f64, obstacles: &[Obstacle3D]) -> Report3D {
    collides_3d_with(config, length, obstacles, &CollisionOptions::default())
}

pub fn collides_3d_with(
    config: &Config3D,
    length: f64,
    obstacles: &[Obstacle3D],
    opts: &CollisionOptions,
) -> Report3D {
    let (pieces, ids) = slice_obstacles(config, length, obstacles);
    let planar = collides_2d_tagged(&config.in_plane(), length, &pieces, &ids, opts);
    let frame = config.plane();
    CollisionReport {
        witness: planar.witness.map(|w| {
            let p = frame.to_world(Vector2::new(w.point[0], w.point[1]));
            Witness {
                s: w.s,
                obstacle: w.obstacle,
                point: [p.x, p.y, p.z],
            }
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elastica::ElasticaParams;

    fn square(cx: f64, cy: f64, h: f64) -> ConvexPiece {
        ConvexPiece::new(vec![
            P2::new(cx - h, cy - h),
            P2::new(cx + h, cy - h),
            P2::new(cx + h, cy + h),
            P2::new(cx - h, cy + h),
        ])
        .unwrap()
    }

    fn bent() -> Config2D {
        Config2D::new(0.0, 0.0, 0.0, ElasticaParams::new(0.7, 0.1, 1.5).unwrap()).unwrap()
    }

    #[test]
    fn far_obstacle_is_clear() {
        let r = collides_2d(&bent(), 1.0, &[square(10.0, 10.0, 0.5)]);
        assert!(!r.colliding());
    }

    #[test]
    fn base_inside_obstacle_hits_at_start() {
        let r = collides_2d(&bent(), 1.0, &[square(0.0, 0.0, 0.05)]);
        let w = r.witness.unwrap();
        assert!(w.s < 1e-3, "s = {}", w.s);
        assert_eq!(w.obstacle, 0);
    }

    #[test]
    fn midpoint_obstacle_hits_near_middle() {
        let cfg = bent();
        let shape = CableShape::new(&cfg, 1.0);
        let mid = shape.position(0.5);
        let r = collides_2d(
            &cfg,
            1.0,
            &[square(10.0, 0.0, 1.0), square(mid.x, mid.y, 0.01)],
        );
        let w = r.witness.unwrap();
        assert_eq!(w.obstacle, 1);
        assert!((w.s - 0.5).abs() < 0.02);
        let p = P2::new(w.point[0], w.point[1]);
        assert!((p - mid).norm() < 0.02);
    }

    #[test]
    fn straight_cable_uses_segments() {
        let cfg =
            Config2D::new(0.0, 0.0, 0.0, ElasticaParams::new(0.0, 0.0, 2.0).unwrap()).unwrap();
        assert!(collides_2d(&cfg, 1.0, &[square(0.5, 0.0, 0.01)]).colliding());
        assert!(!collides_2d(&cfg, 1.0, &[square(0.5, 0.05, 0.01)]).colliding());
        assert!(!collides_2d(&cfg, 1.0, &[square(1.5, 0.0, 0.01)]).colliding());
    }

    #[test]
    fn concave_side_region_misses_arc() {
        // a single convex arc; the region sits between chord and arc
        let cfg =
            Config2D::new(0.0, 0.0, 0.0, ElasticaParams::new(0.6, 0.0, 4.0).unwrap()).unwrap();
        let length = 1.0;
        let shape = CableShape::new(&cfg, length);
        let a = shape.position(0.0);
        let b = shape.position(length);
        let m = shape.position(0.5 * length);
        let chord_mid = 0.5 * (a + b);
        let towards = (m - chord_mid).normalize();
        let gap = (m - chord_mid).norm();
        assert!(gap > 0.01);
        let c = chord_mid + towards * (0.25 * gap);
        let h = 0.2 * gap;
        let region = square(c.x, c.y, h);
        let opts = CollisionOptions::default();
        assert!(arc_region_intersects(&cfg, length, (0.0, length), &region, &opts).is_none());
        // moving it onto the arc crosses it
        let region = square(m.x, m.y, h);
        let (s, _) = arc_region_intersects(&cfg, length, (0.0, length), &region, &opts).unwrap();
        assert!(s > 0.3 && s < 0.5);
    }

    #[test]
    fn inflation_widens_the_band() {
        let cfg =
            Config2D::new(0.0, 0.0, 0.0, ElasticaParams::new(0.0, 0.0, 2.0).unwrap()).unwrap();
        let piece = square(0.5, 0.05, 0.01);
        let thin = CollisionOptions::default();
        let thick = CollisionOptions {
            inflation: 0.05,
            ..thin
        };
        assert!(!collides_2d_with(&cfg, 1.0, &[piece.clone()], &thin).colliding());
        assert!(collides_2d_with(&cfg, 1.0, &[piece], &thick).colliding());
    }

    #[test]
    fn prism_side_count_meets_bound() {
        for r in [0.001, 0.02, 0.5, 3.0] {
            let n = prism_sides(r);
            let err = r / (std::f64::consts::PI / n as f64).cos() - r;
            assert!(err <= SLICE_HAUSDORFF * (1.0 + 1e-9), "r={r} n={n}");
        }
    }

    #[test]
    fn polyhedron_validation() {
        let cube: Vec<[f64; 3]> = (0..8)
            .map(|i| [(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64])
            .collect();
        assert!(Obstacle3D::polyhedron(cube.clone()).is_ok());
        let mut dented = cube;
        dented.push([0.5, 0.5, 0.5]);
        assert!(matches!(
            Obstacle3D::polyhedron(dented),
            Err(ObstacleError::NotConvex(8))
        ));
        let flat = vec![[0., 0., 0.], [1., 0., 0.], [0., 1., 0.], [1., 1., 0.]];
        assert!(Obstacle3D::polyhedron(flat).is_err());
    }

    fn spatial() -> Config3D {
        Config3D::new(
            0.2,
            -0.1,
            0.3,
            0.4,
            -0.2,
            0.1,
            ElasticaParams::new(0.6, 0.2, 1.4).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn cylinder_through_midpoint_collides() {
        let cfg = spatial();
        let shape = crate::elastica::SpatialShape::new(&cfg, 1.0);
        let mid = shape.position(0.5);
        let normal = cfg.plane().normal();
        let base = mid - normal * 0.5;
        let cyl = Obstacle3D::cylinder(base.into(), normal.into(), 0.02, 1.0).unwrap();
        let r = collides_3d(&cfg, 1.0, &[cyl]);
        let w = r.witness.unwrap();
        assert!((w.s - 0.5).abs() < 0.05);
        assert!((Vector3::from(w.point) - mid).norm() < 0.05);
    }

    #[test]
    fn obstacle_off_the_plane_is_clear() {
        let cfg = spatial();
        let normal = cfg.plane().normal();
        let base = cfg.base() + normal * 0.2;
        let cyl = Obstacle3D::cylinder(base.into(), normal.into(), 5.0, 1.0).unwrap();
        assert!(!collides_3d(&cfg, 1.0, &[cyl]).colliding());
        let cube: Vec<[f64; 3]> = (0..8)
            .map(|i| {
                let p = base
                    + Vector3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64)
                        * 0.1
                    + normal * 0.3;
                p.into()
            })
            .collect();
        assert!(!collides_3d(&cfg, 1.0, &[Obstacle3D::polyhedron(cube).unwrap()]).colliding());
    }

    #[test]
    fn polyhedron_slice_of_unit_cube() {
        let cube: Vec<[f64; 3]> = (0..8)
            .map(|i| {
                [
                    (i & 1) as f64 - 0.5,
                    ((i >> 1) & 1) as f64 - 0.5,
                    ((i >> 2) & 1) as f64 - 0.5,
                ]
            })
            .collect();
        let frame = crate::elastica::PlaneFrame::new(Vector3::zeros(), 0.0, 0.0);
        let s = Obstacle3D::Polyhedron { vertices: cube }
            .slice(&frame, 10.0)
            .unwrap();
        assert!((s.area() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cylinder_slice_is_outward() {
        let frame = crate::elastica::PlaneFrame::new(Vector3::zeros(), 0.0, 0.0);
        let cyl = Obstacle3D::cylinder([0.0, 0.0, -1.0], [0.0, 0.0, 1.0], 0.3, 2.0).unwrap();
        let s = cyl.slice(&frame, 10.0).unwrap();
        let area = s.area();
        let disc = std::f64::consts::PI * 0.09;
        assert!(area >= disc && area <= disc * 1.01);
    }
}
