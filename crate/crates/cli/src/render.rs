//! SVG snapshots of cable configurations among obstacles. Semi-spatial
//! scenes are drawn as a top view (projection onto the x-y plane).

use std::fmt::Write as _;

use elastica_steer::collision::Obstacle3D;
use elastica_steer::elastica::{CableShape, Config, SpatialShape};
use elastica_steer::geometry::ConvexPiece;
use nalgebra::{Vector2, Vector3};

use crate::scene::Scene;

pub const CABLE_SAMPLES: usize = 512;
const WIDTH_PX: f64 = 800.0;
const RIM_SAMPLES: usize = 64;

type P2 = Vector2<f64>;

/// Cable polyline projected onto x-y.
pub fn cable_polyline(config: &Config, length: f64) -> Vec<P2> {
    let s = |i: usize| length * i as f64 / (CABLE_SAMPLES - 1) as f64;
    match config {
        Config::Planar(c) => {
            let shape = CableShape::new(c, length);
            (0..CABLE_SAMPLES).map(|i| shape.position(s(i))).collect()
        }
        Config::Spatial(c) => {
            let shape = SpatialShape::new(c, length);
            (0..CABLE_SAMPLES)
                .map(|i| shape.position(s(i)).xy())
                .collect()
        }
    }
}

/// Top-view outline of a 3-D obstacle.
fn footprint(o: &Obstacle3D) -> Option<ConvexPiece> {
    let pts: Vec<P2> = match o {
        Obstacle3D::Cylinder {
            base_center,
            axis,
            radius,
            height,
        } => {
            let a = Vector3::from(*axis).normalize();
            let helper = if a.x.abs() < 0.9 {
                Vector3::x()
            } else {
                Vector3::y()
            };
            let u = a.cross(&helper).normalize();
            let v = a.cross(&u);
            let c0 = Vector3::from(*base_center);
            (0..RIM_SAMPLES)
                .flat_map(|i| {
                    let t = std::f64::consts::TAU * i as f64 / RIM_SAMPLES as f64;
                    let rim = (u * t.cos() + v * t.sin()) * *radius;
                    [(c0 + rim).xy(), (c0 + a * *height + rim).xy()]
                })
                .collect()
        }
        Obstacle3D::Polyhedron { vertices } => {
            vertices.iter().map(|p| P2::new(p[0], p[1])).collect()
        }
    };
    ConvexPiece::hull_of(&pts)
}

struct View {
    min: P2,
    max: P2,
    scale: f64,
}

impl View {
    fn fit(points: impl Iterator<Item = P2>) -> Self {
        let (mut min, mut max) = (P2::repeat(f64::INFINITY), P2::repeat(f64::NEG_INFINITY));
        for p in points {
            min = min.inf(&p);
            max = max.sup(&p);
        }
        if !min.x.is_finite() {
            min = P2::new(-1.0, -1.0);
            max = P2::new(1.0, 1.0);
        }
        let pad = 0.05 * (max - min).max().max(1e-3);
        min -= P2::repeat(pad);
        max += P2::repeat(pad);
        let scale = WIDTH_PX / (max.x - min.x);
        Self { min, max, scale }
    }

    fn height_px(&self) -> f64 {
        (self.max.y - self.min.y) * self.scale
    }

    fn map(&self, p: &P2) -> (f64, f64) {
        (
            (p.x - self.min.x) * self.scale,
            (self.max.y - p.y) * self.scale,
        )
    }

    fn points(&self, pts: &[P2]) -> String {
        let mut s = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = self.map(p);
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{x:.2},{y:.2}");
        }
        s
    }
}

/// Indices of `frames` waypoints spread evenly over the path, always
/// including the first and the last.
pub fn frame_indices(waypoints: usize, frames: usize) -> Vec<usize> {
    if waypoints == 0 || frames == 0 {
        return Vec::new();
    }
    if frames == 1 || waypoints == 1 {
        return vec![waypoints - 1];
    }
    let mut out: Vec<usize> = (0..frames)
        .map(|i| ((i * (waypoints - 1)) as f64 / (frames - 1) as f64).round() as usize)
        .collect();
    out.dedup();
    out
}

/// One SVG document per selected waypoint. The start and target cables
/// are overlaid in dashed strokes on every frame.
pub fn render_path(
    scene: Option<&Scene>,
    configs: &[Config],
    length: f64,
    frames: usize,
) -> Vec<String> {
    let obstacles: Vec<Vec<P2>> = match scene {
        Some(s) if !s.polygons.is_empty() => {
            s.polygons.iter().map(|p| p.vertices().to_vec()).collect()
        }
        Some(s) => s
            .file
            .obstacles_3d
            .iter()
            .filter_map(footprint)
            .map(|c| c.vertices().to_vec())
            .collect(),
        None => Vec::new(),
    };
    let cables: Vec<Vec<P2>> = configs.iter().map(|c| cable_polyline(c, length)).collect();
    let mut extent: Vec<P2> = cables.iter().flatten().copied().collect();
    extent.extend(obstacles.iter().flatten().copied());
    if let Some(s) = scene {
        let w = s.file.workspace;
        if w.min_m[..2]
            .iter()
            .chain(&w.max_m[..2])
            .all(|v| v.is_finite())
        {
            extent.push(P2::new(w.min_m[0], w.min_m[1]));
            extent.push(P2::new(w.max_m[0], w.max_m[1]));
        }
    }
    let view = View::fit(extent.into_iter());
    let (Some(first), Some(last)) = (cables.first(), cables.last()) else {
        return Vec::new();
    };

    frame_indices(cables.len(), frames)
        .into_iter()
        .map(|i| {
            let mut svg = String::new();
            let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
            let _ = writeln!(
                svg,
                r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{:.0}" height="{:.0}" viewBox="0 0 {:.2} {:.2}">"#,
                WIDTH_PX,
                view.height_px().ceil(),
                WIDTH_PX,
                view.height_px()
            );
            let _ = writeln!(svg, r##"  <rect width="100%" height="100%" fill="#ffffff"/>"##);
            for o in &obstacles {
                let _ = writeln!(
                    svg,
                    r##"  <polygon points="{}" fill="#9e9e9e" stroke="#616161" stroke-width="1"/>"##,
                    view.points(o)
                );
            }
            let _ = writeln!(
                svg,
                r##"  <polyline points="{}" fill="none" stroke="#1e88e5" stroke-width="2" stroke-dasharray="6 4"/>"##,
                view.points(first)
            );
            let _ = writeln!(
                svg,
                r##"  <polyline points="{}" fill="none" stroke="#e53935" stroke-width="2" stroke-dasharray="6 4"/>"##,
                view.points(last)
            );
            let cable = &cables[i];
            let _ = writeln!(
                svg,
                r##"  <polyline points="{}" fill="none" stroke="#212121" stroke-width="3"/>"##,
                view.points(cable)
            );
            let (bx, by) = view.map(&cable[0]);
            let _ = writeln!(svg, r##"  <circle cx="{bx:.2}" cy="{by:.2}" r="4" fill="#212121"/>"##);
            let _ = writeln!(
                svg,
                r##"  <text x="8" y="20" font-family="monospace" font-size="14">waypoint {} / {}</text>"##,
                i,
                cables.len() - 1
            );
            svg.push_str("</svg>\n");
            svg
        })
        .collect()
}
