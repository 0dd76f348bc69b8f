//! Seeded random configurations and obstacle scenes for the verification
//! suites.

use std::f64::consts::PI;

use elastica_steer::collision::Obstacle3D;
use elastica_steer::cspace::{in_c_free, ExclusionTolerance};
use elastica_steer::elastica::{Config2D, Config3D, ElasticaParams};
use elastica_steer::geometry::ConvexPiece;
use elastica_steer::oracle::face_planes;
use nalgebra::{Vector2, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn free_params(rng: &mut ChaCha8Rng, length: f64) -> ElasticaParams {
    loop {
        let k = rng.gen_range(0.0..0.85);
        let lt = if rng.gen_bool(0.2) {
            length
        } else {
            rng.gen_range(length..4.0 * length)
        };
        let s0 = rng.gen_range(0.0..lt);
        let p = ElasticaParams::new(k, s0, lt).unwrap();
        if in_c_free(&p, length, ExclusionTolerance::exact(length)) {
            return p;
        }
    }
}

pub fn config_2d(rng: &mut ChaCha8Rng, length: f64) -> Config2D {
    let p = free_params(rng, length);
    Config2D::new(
        rng.gen_range(-0.5..0.5),
        rng.gen_range(-0.5..0.5),
        rng.gen_range(-PI..PI),
        p,
    )
    .unwrap()
}

pub fn config_3d(rng: &mut ChaCha8Rng, length: f64) -> Config3D {
    let p = free_params(rng, length);
    Config3D::new(
        rng.gen_range(-0.5..0.5),
        rng.gen_range(-0.5..0.5),
        rng.gen_range(-0.5..0.5),
        rng.gen_range(-PI..PI),
        rng.gen_range(-PI..PI),
        rng.gen_range(-PI..PI),
        p,
    )
    .unwrap()
}

pub fn convex_blob(rng: &mut ChaCha8Rng, center: Vector2<f64>, radius: f64) -> ConvexPiece {
    loop {
        let pts: Vec<Vector2<f64>> = (0..rng.gen_range(3..9))
            .map(|_| {
                let a = rng.gen_range(0.0..2.0 * PI);
                let r = radius * rng.gen_range(0.3..1.0);
                center + Vector2::new(a.cos(), a.sin()) * r
            })
            .collect();
        if let Some(p) = ConvexPiece::hull_of(&pts) {
            return p;
        }
    }
}

/// A few convex obstacles scattered around the cable's reach.
pub fn scene_2d(rng: &mut ChaCha8Rng, config: &Config2D, length: f64) -> Vec<ConvexPiece> {
    let base = config.base();
    (0..rng.gen_range(1..5))
        .map(|_| {
            let a = rng.gen_range(0.0..2.0 * PI);
            let d = rng.gen_range(0.0..1.2 * length);
            let c = base + Vector2::new(a.cos(), a.sin()) * d;
            let radius = rng.gen_range(0.02..0.3) * length;
            convex_blob(rng, c, radius)
        })
        .collect()
}

fn unit(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

pub fn scene_3d(rng: &mut ChaCha8Rng, config: &Config3D, length: f64) -> Vec<Obstacle3D> {
    let base = config.base();
    (0..rng.gen_range(1..4))
        .map(|_| {
            let c = base + unit(rng) * rng.gen_range(0.0..1.2 * length);
            if rng.gen_bool(0.5) {
                let axis = unit(rng);
                let h = rng.gen_range(0.1..1.0) * length;
                let bottom = c - axis * (0.5 * h);
                Obstacle3D::cylinder(
                    bottom.into(),
                    axis.into(),
                    rng.gen_range(0.01..0.2) * length,
                    h,
                )
                .unwrap()
            } else {
                let r = rng.gen_range(0.05..0.3) * length;
                let pts: Vec<[f64; 3]> = (0..8).map(|_| (c + unit(rng) * r).into()).collect();
                // keep only hull vertices so the obstacle validates
                let planes = face_planes(&pts);
                let on_hull: Vec<[f64; 3]> = pts
                    .iter()
                    .copied()
                    .filter(|p| {
                        planes
                            .iter()
                            .any(|(n, b)| (n.dot(&Vector3::from(*p)) - b).abs() <= 1e-9)
                    })
                    .collect();
                Obstacle3D::polyhedron(on_hull).unwrap()
            }
        })
        .collect()
}
