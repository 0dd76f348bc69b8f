mod common;

use std::f64::consts::PI;

use common::*;
use elastica_steer::geometry::{clip, decompose_convex, BoundingTriangle, ConvexPiece, Polygon};
use nalgebra::Vector2;
use proptest::prelude::*;
use rand::Rng;

type P = Vector2<f64>;

/// Star-shaped polygon: sorted angles, random radii.
fn star(angles: &[f64], radii: &[f64]) -> Vec<P> {
    let mut a: Vec<f64> = angles.to_vec();
    a.sort_by(f64::total_cmp);
    a.dedup_by(|x, y| (*x - *y).abs() < 1e-3);
    a.iter()
        .zip(radii)
        .map(|(t, r)| P::new(r * t.cos(), r * t.sin()))
        .collect()
}

fn in_any(pieces: &[ConvexPiece], p: &P) -> usize {
    pieces.iter().filter(|c| c.contains(p)).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn decomposition_covers_polygon(
        angles in prop::collection::vec(0.0..2.0 * PI, 4..14),
        radii in prop::collection::vec(0.2..1.0f64, 14),
        seed in any::<u64>(),
    ) {
        let Ok(poly) = Polygon::new(star(&angles, &radii)) else { return Ok(()); };
        let pieces = decompose_convex(&poly);
        prop_assert!(pieces.len() <= poly.vertices().len() - 2);
        let total: f64 = pieces.iter().map(|c| c.area()).sum();
        prop_assert!((total - poly.area()).abs() <= 1e-9 * poly.area());
        for c in &pieces {
            prop_assert!(ConvexPiece::new(c.vertices().to_vec()).is_ok());
        }
        let mut r = rng(seed);
        let mut agree = 0;
        let n = 2000;
        for _ in 0..n {
            let p = P::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
            if poly.contains(&p) == (in_any(&pieces, &p) > 0) {
                agree += 1;
            }
        }
        prop_assert!(agree as f64 >= (1.0 - 1e-3) * n as f64);
    }

    #[test]
    fn clip_is_inside_both(
        cx in -1.0..1.0f64, cy in -1.0..1.0f64, h in 0.05..1.5f64,
        ax in -1.0..1.0f64, ay in -1.0..1.0f64, bx in -1.0..1.0f64, by in -1.0..1.0f64,
    ) {
        let piece = ConvexPiece::new(vec![
            P::new(cx - h, cy - h), P::new(cx + h, cy - h), P::new(cx + h, cy + h), P::new(cx - h, cy + h),
        ]).unwrap();
        let tri = BoundingTriangle {
            v_start: P::new(ax, ay), m_mid: P::new(bx, by), v_end: P::new(0.3, -0.7),
            s_start: 0.0, s_end: 1.0, degenerate: false,
        };
        if let Some(c) = clip(&piece, &tri) {
            prop_assert!(ConvexPiece::new(c.vertices().to_vec()).is_ok());
            let grow = |p: &P, poly: &[P]| {
                let n = poly.len();
                (0..n).all(|i| {
                    let a = poly[i];
                    let e = poly[(i + 1) % n] - a;
                    (e.x * (p.y - a.y) - e.y * (p.x - a.x)) / e.norm() >= -1e-12
                })
            };
            for v in c.vertices() {
                prop_assert!(grow(v, piece.vertices()));
                prop_assert!(grow(v, &tri.ccw_vertices()));
            }
        }
    }
}

#[test]
fn l_shape_area_by_membership() {
    let l = vec![
        P::new(0., 0.),
        P::new(2., 0.),
        P::new(2., 1.),
        P::new(1., 1.),
        P::new(1., 2.),
        P::new(0., 2.),
    ];
    let poly = Polygon::new(l).unwrap();
    let pieces = decompose_convex(&poly);
    assert_eq!(pieces.len(), 2);
    let mut r = rng(3);
    let n = 100_000;
    let mut agree = 0;
    for _ in 0..n {
        let p = P::new(r.gen_range(-0.5..2.5), r.gen_range(-0.5..2.5));
        if poly.contains(&p) == (in_any(&pieces, &p) > 0) {
            agree += 1;
        }
    }
    assert!(agree as f64 >= (1.0 - 1e-3) * n as f64);
}

#[test]
fn clipped_square_area_by_membership() {
    let piece = ConvexPiece::new(vec![
        P::new(0., 0.),
        P::new(1., 0.),
        P::new(1., 1.),
        P::new(0., 1.),
    ])
    .unwrap();
    let tri = BoundingTriangle {
        v_start: P::new(-0.5, 0.2),
        m_mid: P::new(1.5, -0.3),
        v_end: P::new(0.6, 1.4),
        s_start: 0.0,
        s_end: 1.0,
        degenerate: false,
    };
    let c = clip(&piece, &tri).unwrap();
    let mut r = rng(4);
    let n = 400_000;
    let hits = (0..n)
        .filter(|_| {
            let p = P::new(r.gen_range(0.0..1.0), r.gen_range(0.0..1.0));
            tri.contains(&p)
        })
        .count();
    let estimate = hits as f64 / n as f64;
    assert!((c.area() - estimate).abs() <= 1e-3 * c.area().max(estimate) + 3.0 / (n as f64).sqrt());
}
