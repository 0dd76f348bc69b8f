//! Elastic and gravitational energy, and the survey that compares
//! full-period shapes against sub-period ones sharing their endpoints.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cspace::K_C;
use crate::elastica::{
    CableProperties, CableShape, Config2D, Config3D, ElasticaParams, SpatialShape,
};
use crate::elliptic::EllipticKernel;
use crate::geometry::split_points;
use crate::quad::integrate_pieces;

/// Closed-form bending energy `½EI∫κ²ds` of a cable of length `props.length`.
///
/// With `u = √λ(s + s0)` the integral reduces to
/// `2EI√λ·(ε(u_L) - ε(u_0) - √λ(1 - k²)L)`.
pub fn elastic_energy(params: &ElasticaParams, props: &CableProperties) -> f64 {
    let kernel = EllipticKernel::new(params.modulus());
    let sqrt_lambda = 4.0 * kernel.complete_k() / params.l_tilde();
    let k = params.k();
    let length = props.length;
    let u0 = sqrt_lambda * params.s0();
    let u1 = sqrt_lambda * (params.s0() + length);
    let p = kernel.epsilon(u1) - kernel.epsilon(u0) - sqrt_lambda * (1.0 - k * k) * length;
    // P ≥ 0 analytically; clamp the rounding noise of nearly straight cables.
    2.0 * props.ei * sqrt_lambda * p.max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    /// Elastic energy (J).
    pub j_e: f64,
    /// Gravitational energy above the cable's lowest point (J).
    pub j_g: f64,
    /// `J_G / J_E`; `None` for a straight cable, where `J_E = 0`.
    pub ratio: Option<f64>,
}

/// Absolute tolerance on `∫(z - z_min)ds` (m²).
const HEIGHT_INTEGRAL_TOL: f64 = 1e-13;

/// Lowest world height along the cable.
pub fn lowest_height(shape: &SpatialShape) -> f64 {
    const SAMPLES: usize = 1024;
    let length = shape.planar().length();
    let z = |s: f64| shape.position(s).z;
    let step = length / SAMPLES as f64;
    let (i_min, z_min) =
        (0..=SAMPLES)
            .map(|i| (i, z(i as f64 * step)))
            .fold(
                (0, f64::INFINITY),
                |best, (i, v)| if v < best.1 { (i, v) } else { best },
            );
    // golden-section refinement inside the bracketing samples
    let mut a = (i_min as f64 - 1.0).max(0.0) * step;
    let mut b = ((i_min + 1) as f64 * step).min(length);
    let ratio = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (z(c), z(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = z(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = z(d);
        }
        if b - a < 1e-15 * length.max(1.0) {
            break;
        }
    }
    z_min.min(fc).min(fd)
}

/// Elastic energy, gravitational energy measured from the cable's lowest
/// point, and their ratio. Gravity acts along world `-z`.
pub fn gravity_ratio(config: &Config3D, props: &CableProperties) -> EnergyBreakdown {
    let j_e = elastic_energy(&config.params, props);
    let length = props.length;
    let shape = SpatialShape::new(config, length);
    let z_min = lowest_height(&shape);
    let breaks = split_points(&config.in_plane(), length);
    let height = integrate_pieces(
        |s| shape.position(s).z - z_min,
        0.0,
        length,
        &breaks,
        HEIGHT_INTEGRAL_TOL,
    );
    let j_g = props.rho * props.g * height;
    EnergyBreakdown {
        j_e,
        j_g,
        ratio: (j_e > 0.0).then(|| j_g / j_e),
    }
}

/// The zip-tie case used to argue that gravity is negligible:
/// `k = 0.87367`, `L̃ = 1.1L`, `s0 = 0.13L̃`, EI = 0.0027 N·m²,
/// ρ = 0.013 kg/m. The deformation plane is vertical and the base
/// tangent points straight up.
pub fn zip_tie_example(length: f64) -> (Config3D, CableProperties) {
    let l_tilde = 1.1 * length;
    let params =
        ElasticaParams::new(0.87367, 0.13 * l_tilde, l_tilde).expect("valid example parameters");
    let config =
        Config3D::new(0.0, 0.0, 0.0, FRAC_PI_2, 0.0, FRAC_PI_2, params).expect("finite pose");
    let props = CableProperties::new(length, 0.0027, 0.013, 9.81).expect("valid properties");
    (config, props)
}

/// Enumeration grid for [`stability_survey`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveySpec {
    pub k_grid: Vec<f64>,
    /// Phases of the full-period shapes as fractions of `L̃`.
    pub s0_fractions: Vec<f64>,
    /// `L̃/L` ratios (> 1) of the symmetric sub-period shapes.
    pub l_tilde_ratios: Vec<f64>,
    /// Endpoint bin edge (m).
    pub bin_size: f64,
}

impl SurveySpec {
    /// Desk-scale grid: k from 0.80 to 0.99 in steps of 0.01, twenty
    /// phases, and bins of `0.02L`.
    pub fn desk_scale(length: f64) -> Self {
        Self {
            k_grid: (80..=99).map(|i| i as f64 / 100.0).collect(),
            s0_fractions: (0..20).map(|i| i as f64 / 20.0).collect(),
            l_tilde_ratios: (1..=10).map(|i| 1.0 + 0.05 * i as f64).collect(),
            bin_size: 0.02 * length,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeKind {
    FullPeriod,
    SubPeriod,
}

/// One enumerated shape. The base sits at the origin with a horizontal
/// tangent; `(x_l, y_l)` is the far endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub kind: ShapeKind,
    pub k: f64,
    pub s0: f64,
    pub l_tilde: f64,
    pub x_l: f64,
    pub y_l: f64,
    pub j: f64,
    pub bin: (i64, i64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinSummary {
    pub bin: (i64, i64),
    pub members: usize,
    /// Row index of the lowest-energy member.
    pub min_row: usize,
    /// Lowest-energy member has `k < k_c`.
    pub min_below_kc: bool,
    /// Row index of the lowest-energy full-period member, if any.
    pub min_full_row: Option<usize>,
    pub min_full_below_kc: Option<bool>,
    /// Holds full-period shapes on both sides of `k_c`.
    pub mixed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Survey {
    pub rows: Vec<SurveyRow>,
    pub bins: Vec<BinSummary>,
}

fn survey_row(
    kind: ShapeKind,
    k: f64,
    s0: f64,
    l_tilde: f64,
    props: &CableProperties,
    bin_size: f64,
) -> Option<SurveyRow> {
    let params = ElasticaParams::new(k, s0, l_tilde).ok()?;
    let cfg = Config2D::new(0.0, 0.0, 0.0, params).ok()?;
    let end = CableShape::new(&cfg, props.length).position(props.length);
    let bin = (
        (end.x / bin_size).floor() as i64,
        (end.y / bin_size).floor() as i64,
    );
    Some(SurveyRow {
        kind,
        k,
        s0: params.s0(),
        l_tilde,
        x_l: end.x,
        y_l: end.y,
        j: elastic_energy(&params, props),
        bin,
    })
}

/// Enumerates full-period shapes (`L̃ = L`) and symmetric sub-period
/// shapes (`L̃ > L`, phase `L̃/4 + (L̃ - L)/2` or `3L̃/4 + (L̃ - L)/2`),
/// bins them by endpoint and summarises each bin.
pub fn stability_survey(spec: &SurveySpec, props: &CableProperties) -> Survey {
    let length = props.length;
    let per_k: Vec<Vec<SurveyRow>> = spec
        .k_grid
        .par_iter()
        .map(|&k| {
            let mut rows = Vec::new();
            for &f in &spec.s0_fractions {
                rows.extend(survey_row(
                    ShapeKind::FullPeriod,
                    k,
                    f * length,
                    length,
                    props,
                    spec.bin_size,
                ));
            }
            for &r in &spec.l_tilde_ratios {
                let lt = r * length;
                for quarter in [0.25, 0.75] {
                    let s0 = quarter * lt + 0.5 * (lt - length);
                    rows.extend(survey_row(
                        ShapeKind::SubPeriod,
                        k,
                        s0,
                        lt,
                        props,
                        spec.bin_size,
                    ));
                }
            }
            rows
        })
        .collect();
    let rows: Vec<SurveyRow> = per_k.into_iter().flatten().collect();

    let mut groups: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (i, r) in rows.iter().enumerate() {
        groups.entry(r.bin).or_default().push(i);
    }
    let argmin = |idx: &mut dyn Iterator<Item = usize>| {
        idx.min_by(|&a, &b| rows[a].j.total_cmp(&rows[b].j).then(a.cmp(&b)))
    };
    let bins = groups
        .into_iter()
        .map(|(bin, idx)| {
            let min_row = argmin(&mut idx.iter().copied()).expect("nonempty bin");
            let min_full_row = argmin(
                &mut idx
                    .iter()
                    .copied()
                    .filter(|&i| rows[i].kind == ShapeKind::FullPeriod),
            );
            let full = || {
                idx.iter()
                    .filter(|&&i| rows[i].kind == ShapeKind::FullPeriod)
            };
            let mixed = full().any(|&i| rows[i].k < K_C) && full().any(|&i| rows[i].k > K_C);
            BinSummary {
                bin,
                members: idx.len(),
                min_row,
                min_below_kc: rows[min_row].k < K_C,
                min_full_row,
                min_full_below_kc: min_full_row.map(|i| rows[i].k < K_C),
                mixed,
            }
        })
        .collect();
    Survey { rows, bins }
}
