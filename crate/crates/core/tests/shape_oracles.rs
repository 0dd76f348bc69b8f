mod common;

use common::*;
use elastica_steer::elastica::{
    costates, derive, hamiltonian, CableProperties, CableShape, SpatialShape,
};
use elastica_steer::geometry::{bounding_triangles, split_points};
use elastica_steer::oracle::integrate_shape_rk4;
use nalgebra::Vector2;
use rand::Rng;

const L: f64 = 1.0;

#[test]
fn closed_form_matches_rk4_in_the_plane() {
    let mut r = rng(11);
    for _ in 0..100 {
        let cfg = config_2d(&mut r, L);
        let shape = CableShape::new(&cfg, L);
        let (end, phi) = integrate_shape_rk4(&cfg, L, 20_000);
        let (p, phi_cf) = shape.pose(L);
        assert!((end - p).norm() < 1e-6 * L, "{cfg:?}: {}", (end - p).norm());
        assert!((phi - phi_cf).abs() < 1e-8);
    }
}

#[test]
fn closed_form_matches_rk4_in_space() {
    let mut r = rng(12);
    for _ in 0..50 {
        let cfg = config_3d(&mut r, L);
        let shape = SpatialShape::new(&cfg, L);
        let (end, _) = integrate_shape_rk4(&cfg.in_plane(), L, 20_000);
        let world = shape.frame().to_world(end);
        assert!((world - shape.position(L)).norm() < 1e-6 * L);
        assert!((shape.position(0.0) - cfg.base()).norm() < 1e-15);
    }
}

#[test]
fn finite_differences_recover_tangent_and_curvature() {
    let mut r = rng(13);
    let h = 1e-5;
    for _ in 0..200 {
        let cfg = config_2d(&mut r, L);
        let shape = CableShape::new(&cfg, L);
        let s = r.gen_range(h..L - h);
        let dp = (shape.position(s + h) - shape.position(s - h)) / (2.0 * h);
        let (_, phi) = shape.pose(s);
        assert!((dp - Vector2::new(phi.cos(), phi.sin())).norm() < 1e-8);
        let dphi = (shape.tangent_angle(s + h) - shape.tangent_angle(s - h)) / (2.0 * h);
        assert!((dphi - shape.curvature(s)).abs() < 1e-6 * (1.0 + shape.kappa_max()));
    }
}

#[test]
fn hamiltonian_is_constant() {
    let mut r = rng(14);
    for _ in 0..100 {
        let cfg = config_2d(&mut r, L);
        let props = CableProperties::new(L, r.gen_range(0.001..0.1), 0.0, 9.81).unwrap();
        let d = derive(&cfg.params, cfg.phi_base, &props);
        let scale = props.ei * d.lambda;
        for i in 0..50 {
            let s = L * i as f64 / 49.0;
            let h = hamiltonian(&cfg, &props, s).unwrap();
            assert!((h - d.h_star).abs() <= 1e-9 * scale, "{h} vs {}", d.h_star);
        }
        let c = costates(&cfg, &props, 0.3).unwrap();
        assert!(
            (c.lambda_x.hypot(c.lambda_y) - d.lambda_r).abs() <= 1e-12 * d.lambda_r.max(1e-300)
        );
    }
}

#[test]
fn curvature_never_exceeds_its_bound() {
    let mut r = rng(15);
    for _ in 0..200 {
        let cfg = config_2d(&mut r, L);
        let shape = CableShape::new(&cfg, L);
        let bound = shape.kappa_max() + 1e-12;
        for i in 0..=500 {
            assert!(shape.curvature(L * i as f64 / 500.0).abs() <= bound);
        }
    }
}

#[test]
fn arcs_are_convex_and_inside_their_triangles() {
    let mut r = rng(16);
    for _ in 0..200 {
        let cfg = config_2d(&mut r, L);
        let shape = CableShape::new(&cfg, L);
        let tris = bounding_triangles(&cfg, L);
        assert!(tris.len() <= 5);
        assert_eq!(tris.len(), split_points(&cfg, L).len() + 1);
        for tri in &tris {
            assert!(tri.s_start < tri.s_end);
            let n = 200;
            let mut sign = 0.0;
            for i in 1..n {
                let s = tri.s_start + (tri.s_end - tri.s_start) * i as f64 / n as f64;
                let k = shape.curvature(s);
                if k != 0.0 {
                    assert!(sign * k >= 0.0, "curvature changes sign inside an arc");
                    sign = k.signum();
                }
                if !tri.degenerate {
                    let p = shape.position(s);
                    let v = tri.ccw_vertices();
                    let inside = (0..3).all(|j| {
                        let (a, b) = (v[j], v[(j + 1) % 3]);
                        let e = b - a;
                        (e.x * (p.y - a.y) - e.y * (p.x - a.x)) / e.norm() >= -1e-9
                    });
                    assert!(inside, "arc point outside its triangle");
                }
            }
        }
    }
}

#[test]
fn full_period_gives_four_arcs() {
    let cfg = elastica_steer::elastica::Config2D::new(
        0.0,
        0.0,
        0.0,
        elastica_steer::elastica::ElasticaParams::new(0.7, 0.0, L).unwrap(),
    )
    .unwrap();
    assert_eq!(bounding_triangles(&cfg, L).len(), 4);
}
