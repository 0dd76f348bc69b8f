//! Exact-sign orientation tests and the segment primitives built on them.

use nalgebra::Vector2;
use robust::Coord;

pub type P2 = Vector2<f64>;

#[inline]
fn coord(p: &P2) -> Coord<f64> {
    Coord { x: p.x, y: p.y }
}

/// Twice the signed area of `(a, b, c)`, with the sign computed exactly.
/// Positive when `c` lies to the left of `a → b`.
#[inline]
pub fn orient(a: &P2, b: &P2, c: &P2) -> f64 {
    robust::orient2d(coord(a), coord(b), coord(c))
}

#[inline]
pub fn cross(a: &P2, b: &P2) -> f64 {
    a.x * b.y - a.y * b.x
}

fn on_segment(a: &P2, b: &P2, p: &P2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed segments `[a, b]` and `[c, d]` share at least one point.
pub fn segments_intersect(a: &P2, b: &P2, c: &P2, d: &P2) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// Distance from `p` to the closed segment `[a, b]`, with the parameter of
/// the closest point.
pub fn point_segment_distance(p: &P2, a: &P2, b: &P2) -> (f64, f64) {
    let ab = b - a;
    let len2 = ab.norm_squared();
    let t = if len2 > 0.0 {
        ((p - a).dot(&ab) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    ((a + ab * t - p).norm(), t)
}

/// Distance between two closed segments (zero when they intersect).
pub fn segment_segment_distance(a: &P2, b: &P2, c: &P2, d: &P2) -> f64 {
    if segments_intersect(a, b, c, d) {
        return 0.0;
    }
    point_segment_distance(a, c, d)
        .0
        .min(point_segment_distance(b, c, d).0)
        .min(point_segment_distance(c, a, b).0)
        .min(point_segment_distance(d, a, b).0)
}

/// Intersection point of the lines `p + t·u` and `q + r·v`, or `None`
/// when the directions are parallel to within `angle_tol` radians.
pub fn line_intersection(p: &P2, u: &P2, q: &P2, v: &P2, angle_tol: f64) -> Option<P2> {
    let denom = cross(u, v);
    if denom.abs() <= angle_tol * u.norm() * v.norm() {
        return None;
    }
    let t = cross(&(q - p), v) / denom;
    Some(p + u * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> P2 {
        P2::new(x, y)
    }

    #[test]
    fn crossing_touching_and_disjoint() {
        assert!(segments_intersect(
            &p(0., 0.),
            &p(1., 1.),
            &p(0., 1.),
            &p(1., 0.)
        ));
        assert!(segments_intersect(
            &p(0., 0.),
            &p(1., 0.),
            &p(1., 0.),
            &p(2., 1.)
        ));
        assert!(segments_intersect(
            &p(0., 0.),
            &p(2., 0.),
            &p(1., 0.),
            &p(3., 0.)
        ));
        assert!(!segments_intersect(
            &p(0., 0.),
            &p(1., 0.),
            &p(2., 0.),
            &p(3., 0.)
        ));
        assert!(!segments_intersect(
            &p(0., 0.),
            &p(1., 0.),
            &p(0., 1.),
            &p(1., 1.)
        ));
    }

    #[test]
    fn near_collinear_sign_is_exact() {
        let a = p(0.5, 0.5);
        let b = p(12.0, 12.0);
        let c = p(24.0, 24.0 + 1e-14);
        assert!(orient(&a, &b, &c) > 0.0);
    }

    #[test]
    fn distances() {
        assert!(
            (point_segment_distance(&p(0.5, 1.0), &p(0., 0.), &p(1., 0.)).0 - 1.0).abs() < 1e-15
        );
        assert!(
            (segment_segment_distance(&p(0., 0.), &p(1., 0.), &p(0., 2.), &p(1., 3.)) - 2.0).abs()
                < 1e-15
        );
        let m = line_intersection(&p(0., 0.), &p(1., 0.), &p(1., 1.), &p(0., 1.), 1e-9).unwrap();
        assert!((m - p(1., 0.)).norm() < 1e-15);
        assert!(line_intersection(&p(0., 0.), &p(1., 0.), &p(0., 1.), &p(2., 0.), 1e-9).is_none());
    }
}
