//! Brute-force reference computations. These are slow and simple on
//! purpose; they exist to cross-check the closed-form and pruned paths.

use nalgebra::{Vector2, Vector3};

use crate::collision::Obstacle3D;
use crate::elastica::{
    CableProperties, CableShape, Config2D, Config3D, ElasticaParams, SpatialShape,
};
use crate::geometry::{convex_distance, convex_overlap, split_points, ConvexPiece};
use crate::predicates::P2;
use crate::quad::integrate_pieces;

/// Sample count whose chord error stays below `chord_error`.
pub fn polyline_samples(kappa_max: f64, length: f64, chord_error: f64) -> usize {
    if kappa_max == 0.0 {
        return 2;
    }
    let spacing = (8.0 * chord_error / kappa_max).sqrt();
    ((length / spacing).ceil() as usize).max(2)
}

/// Dense planar polyline of the cable, chord error below `1e-5·L`.
pub fn dense_polyline(config: &Config2D, length: f64) -> Vec<P2> {
    let shape = CableShape::new(config, length);
    let n = polyline_samples(shape.kappa_max(), length, 1e-5 * length);
    (0..=n)
        .map(|i| shape.position(length * i as f64 / n as f64))
        .collect()
}

/// Oracle verdict plus a clearance: the gap to the nearest piece when
/// clear, the deepest penetration when colliding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleVerdict {
    pub colliding: bool,
    pub clearance: f64,
}

fn penetration(p: &P2, piece: &[P2]) -> f64 {
    let n = piece.len();
    (0..n)
        .map(|i| {
            let a = piece[i];
            let e = piece[(i + 1) % n] - a;
            (e.x * (p.y - a.y) - e.y * (p.x - a.x)) / e.norm()
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn polyline_vs_pieces(poly: &[P2], pieces: &[ConvexPiece]) -> OracleVerdict {
    let mut colliding = false;
    let mut gap = f64::INFINITY;
    let mut depth: f64 = 0.0;
    for seg in poly.windows(2) {
        for piece in pieces {
            let v = piece.vertices();
            if convex_overlap(seg, v) {
                colliding = true;
            } else if !colliding {
                gap = gap.min(convex_distance(seg, v));
            }
        }
    }
    if colliding {
        for p in poly {
            for piece in pieces {
                depth = depth.max(penetration(p, piece.vertices()));
            }
        }
        // a segment may cross a corner without any vertex inside
        return OracleVerdict {
            colliding,
            clearance: depth,
        };
    }
    OracleVerdict {
        colliding,
        clearance: gap,
    }
}

pub fn collides_2d(config: &Config2D, length: f64, pieces: &[ConvexPiece]) -> OracleVerdict {
    polyline_vs_pieces(&dense_polyline(config, length), pieces)
}

/// Signed distance from a point to a solid: negative inside. For
/// polyhedra the outside value is the largest face-plane distance, a lower
/// bound on the true distance.
pub fn signed_distance_3d(p: &Vector3<f64>, obstacle: &Obstacle3D) -> f64 {
    match obstacle {
        Obstacle3D::Cylinder {
            base_center,
            axis,
            radius,
            height,
        } => {
            let a = Vector3::from(*axis).normalize();
            let d = p - Vector3::from(*base_center);
            let t = d.dot(&a);
            let radial = (d - a * t).norm() - radius;
            let axial = (t - height).max(-t);
            if radial <= 0.0 && axial <= 0.0 {
                radial.max(axial)
            } else {
                Vector2::new(radial.max(0.0), axial.max(0.0)).norm()
            }
        }
        Obstacle3D::Polyhedron { vertices } => face_planes(vertices)
            .iter()
            .map(|(n, b)| n.dot(p) - b)
            .fold(f64::NEG_INFINITY, f64::max),
    }
}

/// Outward face planes `n·x ≤ b` of the hull of `vertices`.
pub fn face_planes(vertices: &[[f64; 3]]) -> Vec<(Vector3<f64>, f64)> {
    let v: Vec<Vector3<f64>> = vertices.iter().map(|p| Vector3::from(*p)).collect();
    let scale = v.iter().map(|p| p.norm()).fold(1.0, f64::max);
    let mut planes: Vec<(Vector3<f64>, f64)> = Vec::new();
    let n = v.len();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let normal = (v[j] - v[i]).cross(&(v[k] - v[i]));
                if normal.norm() <= 1e-12 * scale * scale {
                    continue;
                }
                let mut nrm = normal.normalize();
                let side: Vec<f64> = v.iter().map(|p| nrm.dot(&(p - v[i]))).collect();
                let slack = 1e-9 * scale;
                let above = side.iter().any(|&d| d > slack);
                let below = side.iter().any(|&d| d < -slack);
                if above == below {
                    continue;
                }
                if above {
                    nrm = -nrm;
                }
                let b = nrm.dot(&v[i]);
                if !planes
                    .iter()
                    .any(|(m, c)| (m - nrm).norm() < 1e-9 && (c - b).abs() < 1e-9 * scale)
                {
                    planes.push((nrm, b));
                }
            }
        }
    }
    planes
}

/// Dense 3-D sampling of the cable against solid obstacles.
pub fn collides_3d(config: &Config3D, length: f64, obstacles: &[Obstacle3D]) -> OracleVerdict {
    let shape = SpatialShape::new(config, length);
    let n = polyline_samples(shape.planar().kappa_max(), length, 1e-5 * length).max(2000);
    let mut min_sd = f64::INFINITY;
    for i in 0..=n {
        let p = shape.position(length * i as f64 / n as f64);
        for ob in obstacles {
            min_sd = min_sd.min(signed_distance_3d(&p, ob));
        }
    }
    OracleVerdict {
        colliding: min_sd <= 0.0,
        clearance: min_sd.abs(),
    }
}

/// `½EI∫κ²ds` by adaptive quadrature.
pub fn elastic_energy_quadrature(params: &ElasticaParams, props: &CableProperties) -> f64 {
    let cfg = Config2D {
        x0: 0.0,
        y0: 0.0,
        phi_base: 0.0,
        params: *params,
    };
    let length = props.length;
    let shape = CableShape::new(&cfg, length);
    let scale = shape.kappa_max().powi(2) * length;
    if scale == 0.0 {
        return 0.0;
    }
    let breaks = split_points(&cfg, length);
    let integral = integrate_pieces(
        |s| shape.curvature(s).powi(2),
        0.0,
        length,
        &breaks,
        1e-13 * scale,
    );
    0.5 * props.ei * integral
}

/// Integrates `x' = cos φ, y' = sin φ, φ' = κ(s)` with classical RK4,
/// using the closed-form curvature. Returns the far endpoint and tangent.
pub fn integrate_shape_rk4(config: &Config2D, length: f64, steps: usize) -> (P2, f64) {
    let shape = CableShape::new(config, length);
    let h = length / steps as f64;
    let dir = |phi: f64| Vector2::new(phi.cos(), phi.sin());
    let mut p = config.base();
    let mut phi = shape.tangent_angle(0.0);
    for i in 0..steps {
        let s = i as f64 * h;
        // κ depends on s only, so the φ stages need just three samples
        let (c0, c1, c2) = (
            shape.curvature(s),
            shape.curvature(s + 0.5 * h),
            shape.curvature(s + h),
        );
        let d1 = dir(phi);
        let d2 = dir(phi + 0.5 * h * c0);
        let d3 = dir(phi + 0.5 * h * c1);
        let d4 = dir(phi + h * c1);
        p += (d1 + 2.0 * d2 + 2.0 * d3 + d4) * (h / 6.0);
        phi += h / 6.0 * (c0 + 4.0 * c1 + c2);
    }
    (p, phi)
}

/// `(sn, cn, dn)(u)` by RK4 on `sn' = cn·dn, cn' = -sn·dn, dn' = -k²·sn·cn`.
pub fn jacobi_ode(u: f64, k: f64, steps: usize) -> (f64, f64, f64) {
    let m = k * k;
    let rhs = |y: [f64; 3]| [y[1] * y[2], -y[0] * y[2], -m * y[0] * y[1]];
    let h = u / steps as f64;
    let mut y = [0.0, 1.0, 1.0];
    let add =
        |a: [f64; 3], b: [f64; 3], t: f64| [a[0] + t * b[0], a[1] + t * b[1], a[2] + t * b[2]];
    for _ in 0..steps {
        let k1 = rhs(y);
        let k2 = rhs(add(y, k1, 0.5 * h));
        let k3 = rhs(add(y, k2, 0.5 * h));
        let k4 = rhs(add(y, k3, h));
        for i in 0..3 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    (y[0], y[1], y[2])
}

/// `K(k)` and `E(k)` by quadrature over the amplitude.
pub fn complete_integrals_quadrature(k: f64) -> (f64, f64) {
    let m = k * k;
    let half_pi = std::f64::consts::FRAC_PI_2;
    // the integrands steepen near π/2 as k → 1
    let breaks: Vec<f64> = (1..=6).map(|i| half_pi * (1.0 - 0.5_f64.powi(i))).collect();
    let kk = integrate_pieces(
        |t: f64| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(),
        0.0,
        half_pi,
        &breaks,
        1e-14,
    );
    let ee = integrate_pieces(
        |t: f64| (1.0 - m * t.sin().powi(2)).sqrt(),
        0.0,
        half_pi,
        &breaks,
        1e-14,
    );
    (kk, ee)
}

/// `ε(u) = ∫₀ᵘ dn²` by quadrature, with `dn` from the kernel.
pub fn epsilon_quadrature(u: f64, k: f64) -> f64 {
    let kernel = crate::elliptic::EllipticKernel::new(
        crate::elliptic::Modulus::new(k).expect("k in [0, 1)"),
    );
    let quarter = kernel.complete_k();
    let breaks: Vec<f64> = (1..)
        .map(|i| i as f64 * quarter)
        .take_while(|&b| b < u.abs())
        .map(|b| b * u.signum())
        .collect();
    let (a, b) = if u >= 0.0 { (0.0, u) } else { (u, 0.0) };
    let mut breaks = breaks;
    breaks.sort_by(f64::total_cmp);
    let v = integrate_pieces(
        |t| kernel.jacobi(t).dn.powi(2),
        a,
        b,
        &breaks,
        1e-14 * (1.0 + u.abs()),
    );
    if u >= 0.0 {
        v
    } else {
        -v
    }
}

/// Root of `2E(k) - K(k)` by bisection: the modulus at which the
/// full-period elastica closes into a figure eight.
pub fn figure_eight_modulus() -> f64 {
    let g = |k: f64| {
        let kernel = crate::elliptic::EllipticKernel::new(
            crate::elliptic::Modulus::new(k).expect("k in [0, 1)"),
        );
        2.0 * kernel.complete_e() - kernel.complete_k()
    };
    let (mut a, mut b) = (0.5, 0.99);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if g(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
        if b - a < 1e-15 {
            break;
        }
    }
    0.5 * (a + b)
}

/// Bisection for the smallest modulus at which a full-period elastica
/// (`L̃ = L`) touches itself, over the given phases (fractions of `L̃`).
/// Returns the final bracket.
pub fn first_self_touch_bracket(phases: &[f64], tol: f64) -> (f64, f64) {
    let touches = |k: f64| {
        phases.iter().any(|&f| {
            let p = ElasticaParams::new(k, f, 1.0).expect("valid");
            crate::cspace::self_intersects_with_tolerance(&p, 1.0, 1e-6)
        })
    };
    let (mut a, mut b) = (0.5, 0.95);
    debug_assert!(!touches(a) && touches(b));
    while b - a > tol {
        let m = 0.5 * (a + b);
        if touches(m) {
            b = m;
        } else {
            a = m;
        }
    }
    (a, b)
}
