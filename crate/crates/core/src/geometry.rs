//! Planar geometry: simple polygons, convex decomposition, the bounding
//! triangles of the cable's convex arcs, and convex clipping.

use nalgebra::Vector2;
use thiserror::Error;

use crate::elastica::{CableShape, Config2D};
use crate::predicates::{
    line_intersection, orient, segment_segment_distance, segments_intersect, P2,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("polygon needs at least 3 distinct, non-collinear vertices (got {0})")]
    TooFewVertices(usize),
    #[error("polygon vertex {0} is not finite")]
    NonFinite(usize),
    #[error("polygon has zero area")]
    ZeroArea,
    #[error("polygon is not simple: edges {0} and {1} intersect")]
    NotSimple(usize, usize),
    #[error("vertices do not form a convex counterclockwise polygon (at vertex {0})")]
    NotConvex(usize),
}

/// Signed area (positive for counterclockwise order).
pub fn signed_area(pts: &[P2]) -> f64 {
    let n = pts.len();
    (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            a.x * b.y - a.y * b.x
        })
        .sum::<f64>()
        * 0.5
}

/// Removes repeated and exactly collinear consecutive vertices.
fn clean_ring(mut pts: Vec<P2>) -> Vec<P2> {
    loop {
        let n = pts.len();
        if n < 3 {
            return pts;
        }
        let drop = (0..n).find(|&i| {
            let prev = pts[(i + n - 1) % n];
            let next = pts[(i + 1) % n];
            pts[i] == prev || orient(&prev, &pts[i], &next) == 0.0
        });
        match drop {
            Some(i) => {
                pts.remove(i);
            }
            None => return pts,
        }
    }
}

/// A simple polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<P2>,
}

impl Polygon {
    /// Validates a polygon. Clockwise input is reversed; repeated and
    /// collinear vertices are dropped.
    pub fn new(vertices: Vec<P2>) -> Result<Self, GeometryError> {
        if let Some(i) = vertices
            .iter()
            .position(|p| !(p.x.is_finite() && p.y.is_finite()))
        {
            return Err(GeometryError::NonFinite(i));
        }
        let mut pts = clean_ring(vertices);
        if pts.len() < 3 {
            return Err(GeometryError::TooFewVertices(pts.len()));
        }
        let n = pts.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                if segments_intersect(&pts[i], &pts[(i + 1) % n], &pts[j], &pts[(j + 1) % n]) {
                    return Err(GeometryError::NotSimple(i, j));
                }
            }
        }
        let area = signed_area(&pts);
        if area == 0.0 {
            return Err(GeometryError::ZeroArea);
        }
        if area < 0.0 {
            pts.reverse();
        }
        Ok(Self { vertices: pts })
    }

    pub fn vertices(&self) -> &[P2] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// Even-odd point membership (boundary points may go either way).
    pub fn contains(&self, p: &P2) -> bool {
        let n = self.vertices.len();
        let mut inside = false;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

/// Counterclockwise convex polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPiece {
    vertices: Vec<P2>,
}

const CONVEX_SLACK: f64 = 1e-12;

impl ConvexPiece {
    pub fn new(vertices: Vec<P2>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        if let Some(i) = vertices
            .iter()
            .position(|p| !(p.x.is_finite() && p.y.is_finite()))
        {
            return Err(GeometryError::NonFinite(i));
        }
        let scale = vertices.iter().map(|p| p.norm()).fold(1.0, f64::max);
        for i in 0..n {
            let a = vertices[(i + n - 1) % n];
            let b = vertices[i];
            let c = vertices[(i + 1) % n];
            let e1 = b - a;
            let e2 = c - b;
            if e1.x * e2.y - e1.y * e2.x < -CONVEX_SLACK * scale * scale {
                return Err(GeometryError::NotConvex(i));
            }
        }
        if signed_area(&vertices) <= 0.0 {
            return Err(GeometryError::ZeroArea);
        }
        Ok(Self { vertices })
    }

    /// Convex hull of a point cloud; `None` if the hull has no area.
    pub fn hull_of(points: &[P2]) -> Option<Self> {
        let hull = convex_hull(points);
        (hull.len() >= 3 && signed_area(&hull) > 0.0).then_some(Self { vertices: hull })
    }

    pub fn vertices(&self) -> &[P2] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// Closed membership test.
    pub fn contains(&self, p: &P2) -> bool {
        point_in_convex(&self.vertices, p)
    }

    /// `[min_x, max_x, min_y, max_y]`.
    pub fn bounds(&self) -> [f64; 4] {
        bounds_of(&self.vertices)
    }
}

pub fn bounds_of(pts: &[P2]) -> [f64; 4] {
    pts.iter().fold(
        [
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        ],
        |b, p| [b[0].min(p.x), b[1].max(p.x), b[2].min(p.y), b[3].max(p.y)],
    )
}

/// Closed membership in a counterclockwise convex polygon.
pub fn point_in_convex(poly: &[P2], p: &P2) -> bool {
    let n = poly.len();
    (0..n).all(|i| orient(&poly[i], &poly[(i + 1) % n], p) >= 0.0)
}

/// Andrew's monotone chain; counterclockwise, without collinear points.
pub fn convex_hull(points: &[P2]) -> Vec<P2> {
    let mut pts: Vec<P2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<P2> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0.0
        {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<P2> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0.0
        {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Splits a simple polygon into convex pieces: ear-clipping triangulation
/// followed by greedy removal of inessential diagonals (Hertel–Mehlhorn).
pub fn decompose_convex(poly: &Polygon) -> Vec<ConvexPiece> {
    let v = poly.vertices();
    let n = v.len();
    if (0..n).all(|i| orient(&v[(i + n - 1) % n], &v[i], &v[(i + 1) % n]) > 0.0) {
        return vec![ConvexPiece {
            vertices: v.to_vec(),
        }];
    }
    let mut pieces = ear_clip(v);
    merge_pieces(v, &mut pieces);
    pieces
        .into_iter()
        .map(|idx| ConvexPiece {
            vertices: idx.into_iter().map(|i| v[i]).collect(),
        })
        .collect()
}

fn ear_clip(v: &[P2]) -> Vec<Vec<usize>> {
    let mut ring: Vec<usize> = (0..v.len()).collect();
    let mut tris = Vec::with_capacity(v.len() - 2);
    while ring.len() > 3 {
        let m = ring.len();
        let ear = (0..m).find(|&i| {
            let (a, b, c) = (ring[(i + m - 1) % m], ring[i], ring[(i + 1) % m]);
            if orient(&v[a], &v[b], &v[c]) <= 0.0 {
                return false;
            }
            ring.iter().all(|&j| {
                if j == a || j == b || j == c || v[j] == v[a] || v[j] == v[b] || v[j] == v[c] {
                    return true;
                }
                let p = &v[j];
                !(orient(&v[a], &v[b], p) >= 0.0
                    && orient(&v[b], &v[c], p) >= 0.0
                    && orient(&v[c], &v[a], p) >= 0.0)
            })
        });
        // A simple polygon always has an ear; exact predicates keep it so.
        let i = ear.expect("simple polygon without an ear");
        let m = ring.len();
        tris.push(vec![ring[(i + m - 1) % m], ring[i], ring[(i + 1) % m]]);
        ring.remove(i);
    }
    tris.push(ring);
    tris
}

fn merge_pieces(v: &[P2], pieces: &mut Vec<Vec<usize>>) {
    loop {
        let mut merged = false;
        'outer: for p in 0..pieces.len() {
            for q in (p + 1)..pieces.len() {
                if let Some(joined) = try_merge(v, &pieces[p], &pieces[q]) {
                    pieces[p] = joined;
                    pieces.remove(q);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            return;
        }
    }
}

/// Joins two pieces across a shared edge if the union stays convex.
fn try_merge(v: &[P2], p: &[usize], q: &[usize]) -> Option<Vec<usize>> {
    let np = p.len();
    let nq = q.len();
    for i in 0..np {
        let a = p[i];
        let b = p[(i + 1) % np];
        let Some(j) = (0..nq).find(|&j| q[j] == b && q[(j + 1) % nq] == a) else {
            continue;
        };
        // p rotated to [a, b, p1..pk], q rotated to [b, a, q1..qm]
        let p_rest: Vec<usize> = (2..np).map(|t| p[(i + t) % np]).collect();
        let q_rest: Vec<usize> = (2..nq).map(|t| q[(j + t) % nq]).collect();
        let before_a = *p_rest.last().unwrap_or(&b);
        let after_a = q_rest[0];
        let before_b = *q_rest.last().unwrap();
        let after_b = *p_rest.first().unwrap_or(&a);
        if orient(&v[before_a], &v[a], &v[after_a]) < 0.0
            || orient(&v[before_b], &v[b], &v[after_b]) < 0.0
        {
            return None;
        }
        let mut out = vec![a];
        out.extend(q_rest);
        out.push(b);
        out.extend(p_rest);
        return Some(out);
    }
    None
}

/// Triangle `(v_start, m_mid, v_end)` enclosing one convex arc of the cable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingTriangle {
    pub v_start: P2,
    pub m_mid: P2,
    pub v_end: P2,
    pub s_start: f64,
    pub s_end: f64,
    /// Tangents at the ends are parallel: the arc is (numerically) its
    /// chord, stored as the segment `v_start → v_end`.
    pub degenerate: bool,
}

/// Tangent directions closer than this (rad) are treated as parallel.
pub const PARALLEL_TANGENT_TOL: f64 = 1e-9;

impl BoundingTriangle {
    /// Triangle of the arc between two cable points with known tangents.
    pub fn from_poses(s: (f64, f64), start: (P2, f64), end: (P2, f64)) -> Self {
        let (va, pa) = start;
        let (vb, pb) = end;
        let da = Vector2::new(pa.cos(), pa.sin());
        let db = Vector2::new(pb.cos(), pb.sin());
        let mid = if (pb - pa).abs() <= PARALLEL_TANGENT_TOL {
            None
        } else {
            line_intersection(&va, &da, &vb, &db, PARALLEL_TANGENT_TOL)
        };
        match mid {
            Some(m) => Self {
                v_start: va,
                m_mid: m,
                v_end: vb,
                s_start: s.0,
                s_end: s.1,
                degenerate: false,
            },
            None => Self {
                v_start: va,
                m_mid: 0.5 * (va + vb),
                v_end: vb,
                s_start: s.0,
                s_end: s.1,
                degenerate: true,
            },
        }
    }

    /// Vertices in counterclockwise order (two points when degenerate).
    pub fn ccw_vertices(&self) -> Vec<P2> {
        if self.degenerate {
            return vec![self.v_start, self.v_end];
        }
        let (a, b, c) = (self.v_start, self.m_mid, self.v_end);
        if orient(&a, &b, &c) >= 0.0 {
            vec![a, b, c]
        } else {
            vec![a, c, b]
        }
    }

    pub fn contains(&self, p: &P2) -> bool {
        point_in_convex(&self.ccw_vertices(), p)
    }
}

/// Arclengths in `(0, L)` where `s + s0` crosses a multiple of `L̃/4`:
/// the inflection and extremal-curvature points.
pub fn split_points(config: &Config2D, length: f64) -> Vec<f64> {
    let quarter = 0.25 * config.params.l_tilde();
    let s0 = config.params.s0();
    let eps = 1e-12 * length;
    let mut out = Vec::new();
    let mut j = (s0 / quarter).floor() + 1.0;
    loop {
        let s = j * quarter - s0;
        if s >= length - eps {
            break;
        }
        if s > eps {
            out.push(s);
        }
        j += 1.0;
    }
    out
}

/// Bounding triangles of the cable's convex arcs, in arclength order.
pub fn bounding_triangles(config: &Config2D, length: f64) -> Vec<BoundingTriangle> {
    bounding_triangles_of(&CableShape::new(config, length), config)
}

pub fn bounding_triangles_of(shape: &CableShape, config: &Config2D) -> Vec<BoundingTriangle> {
    let length = shape.length();
    let mut knots = vec![0.0];
    knots.extend(split_points(config, length));
    knots.push(length);
    let poses: Vec<(P2, f64)> = knots.iter().map(|&s| shape.pose(s)).collect();
    knots
        .windows(2)
        .zip(poses.windows(2))
        .map(|(s, p)| BoundingTriangle::from_poses((s[0], s[1]), p[0], p[1]))
        .collect()
}

/// Clips a counterclockwise convex polygon against a counterclockwise
/// convex clip region (Sutherland–Hodgman).
pub fn clip_convex(subject: &[P2], clipper: &[P2]) -> Vec<P2> {
    let mut out: Vec<P2> = subject.to_vec();
    let m = clipper.len();
    for e in 0..m {
        if out.is_empty() {
            break;
        }
        let a = clipper[e];
        let b = clipper[(e + 1) % m];
        let input = std::mem::take(&mut out);
        let n = input.len();
        for i in 0..n {
            let cur = input[i];
            let prev = input[(i + n - 1) % n];
            let cur_in = orient(&a, &b, &cur) >= 0.0;
            let prev_in = orient(&a, &b, &prev) >= 0.0;
            if cur_in != prev_in {
                if let Some(x) = segment_line_crossing(&prev, &cur, &a, &b) {
                    out.push(x);
                }
            }
            if cur_in {
                out.push(cur);
            }
        }
    }
    out.dedup();
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

fn segment_line_crossing(p: &P2, q: &P2, a: &P2, b: &P2) -> Option<P2> {
    let d = b - a;
    let fp = d.x * (p.y - a.y) - d.y * (p.x - a.x);
    let fq = d.x * (q.y - a.y) - d.y * (q.x - a.x);
    let denom = fp - fq;
    if denom == 0.0 {
        return None;
    }
    let t = (fp / denom).clamp(0.0, 1.0);
    Some(p + (q - p) * t)
}

/// `piece ∩ triangle`, or `None` when the intersection has no interior.
/// Degenerate (segment) triangles have no interior and always give `None`.
pub fn clip(piece: &ConvexPiece, tri: &BoundingTriangle) -> Option<ConvexPiece> {
    if tri.degenerate {
        return None;
    }
    let out = clip_convex(piece.vertices(), &tri.ccw_vertices());
    if out.len() < 3 || signed_area(&out) <= 0.0 {
        return None;
    }
    Some(ConvexPiece { vertices: out })
}

/// Closed overlap test for convex polygons (a polygon may also be a
/// segment or a point).
pub fn convex_overlap(a: &[P2], b: &[P2]) -> bool {
    if a.len() <= 2 && b.len() <= 2 {
        let (a0, a1) = (a[0], *a.last().unwrap());
        let (b0, b1) = (b[0], *b.last().unwrap());
        return segments_intersect(&a0, &a1, &b0, &b1);
    }
    !separated_by_edges(a, b) && !separated_by_edges(b, a)
}

fn separated_by_edges(poly: &[P2], other: &[P2]) -> bool {
    let n = poly.len();
    if n < 3 {
        // Segment: test both sides of its supporting line.
        let (p, q) = (poly[0], *poly.last().unwrap());
        return other.iter().all(|x| orient(&p, &q, x) > 0.0)
            || other.iter().all(|x| orient(&p, &q, x) < 0.0);
    }
    (0..n).any(|i| {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        other.iter().all(|x| orient(&p, &q, x) < 0.0)
    })
}

/// Distance between two convex sets given by their vertices; zero when
/// they overlap.
pub fn convex_distance(a: &[P2], b: &[P2]) -> f64 {
    if convex_overlap(a, b) {
        return 0.0;
    }
    let edges = |p: &[P2]| -> Vec<(P2, P2)> {
        let n = p.len();
        if n == 1 {
            vec![(p[0], p[0])]
        } else if n == 2 {
            vec![(p[0], p[1])]
        } else {
            (0..n).map(|i| (p[i], p[(i + 1) % n])).collect()
        }
    };
    let ea = edges(a);
    let eb = edges(b);
    let mut best = f64::INFINITY;
    for (p, q) in &ea {
        for (r, s) in &eb {
            best = best.min(segment_segment_distance(p, q, r, s));
        }
    }
    best
}
