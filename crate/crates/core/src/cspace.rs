//! The safe configuration space: stability, non-self-intersection, grip
//! feasibility, and the configuration grid the planner walks on.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elastica::{CableShape, Config, Config2D, Config3D, ElasticaParams, GripState};
use crate::predicates::{segments_intersect, P2};

/// Modulus at which the full-period elastica closes into a figure eight;
/// full-period shapes are stable below it.
pub const K_C: f64 = 0.908;
/// Modulus at which the full-period elastica first touches itself.
pub const K_MAX: f64 = 0.855;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SafetyConstants {
    pub k_c: f64,
    pub k_max: f64,
}

impl Default for SafetyConstants {
    fn default() -> Self {
        Self {
            k_c: K_C,
            k_max: K_MAX,
        }
    }
}

/// Fattening of the excluded set `{L̃ = L, s0 ∈ {L/4, 3L/4}}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExclusionTolerance {
    pub length: f64,
    pub phase: f64,
}

impl ExclusionTolerance {
    /// Off-grid use: only rounding noise counts as "on" the excluded set.
    pub fn exact(length: f64) -> Self {
        Self {
            length: 1e-12 * length,
            phase: 1e-12 * length,
        }
    }
}

fn in_stable_region(
    params: &ElasticaParams,
    length: f64,
    k_limit: f64,
    tol: ExclusionTolerance,
) -> bool {
    let k = params.k();
    let lt = params.l_tilde();
    let s0 = params.s0();
    if !(0.0..k_limit).contains(&k) || !(0.0..lt).contains(&s0) {
        return false;
    }
    if lt < length * (1.0 - 1e-12) {
        return false;
    }
    let full_period = (lt - length).abs() <= tol.length;
    let bad_phase =
        (s0 - 0.25 * length).abs() <= tol.phase || (s0 - 0.75 * length).abs() <= tol.phase;
    !(full_period && bad_phase)
}

/// Membership in the locally stable set.
pub fn in_c_stable(params: &ElasticaParams, length: f64, tol: ExclusionTolerance) -> bool {
    in_stable_region(params, length, K_C, tol)
}

/// Membership in the stable, non-self-intersecting set.
pub fn in_c_free(params: &ElasticaParams, length: f64, tol: ExclusionTolerance) -> bool {
    in_stable_region(params, length, K_MAX, tol)
}

/// Endpoint separation does not exceed the cable length.
pub fn grip_feasible(grip: &GripState, length: f64) -> bool {
    grip.separation() <= length * (1.0 + 1e-12)
}

/// Dense polyline check for self-intersection of the cable curve.
///
/// The curve is sampled uniformly with a spacing whose sagitta bound
/// `κ_max·δ²/8` stays below `1e-4·L`; non-adjacent segment pairs are then
/// tested for intersection.
pub fn self_intersects(params: &ElasticaParams, length: f64) -> bool {
    self_intersects_with_tolerance(params, length, 1e-4 * length)
}

pub fn self_intersects_with_tolerance(
    params: &ElasticaParams,
    length: f64,
    chord_error: f64,
) -> bool {
    let cfg = Config2D {
        x0: 0.0,
        y0: 0.0,
        phi_base: 0.0,
        params: *params,
    };
    let shape = CableShape::new(&cfg, length);
    let kmax = shape.kappa_max();
    if kmax == 0.0 {
        return false;
    }
    let spacing = (8.0 * chord_error / kmax).sqrt();
    let n = ((length / spacing).ceil() as usize).max(8);
    let pts: Vec<P2> = (0..=n)
        .map(|i| shape.local(length * i as f64 / n as f64))
        .collect();
    let boxes: Vec<[f64; 4]> = pts
        .windows(2)
        .map(|w| {
            [
                w[0].x.min(w[1].x),
                w[0].x.max(w[1].x),
                w[0].y.min(w[1].y),
                w[0].y.max(w[1].y),
            ]
        })
        .collect();
    for i in 0..n {
        for j in (i + 2)..n {
            let (a, b) = (&boxes[i], &boxes[j]);
            if a[1] < b[0] || b[1] < a[0] || a[3] < b[2] || b[3] < a[2] {
                continue;
            }
            if segments_intersect(&pts[i], &pts[i + 1], &pts[j], &pts[j + 1]) {
                return true;
            }
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("axis {axis}: step must be positive and finite, got {step}")]
    Step { axis: &'static str, step: f64 },
    #[error("axis {axis}: empty or non-finite bounds [{min}, {max}]")]
    Bounds {
        axis: &'static str,
        min: f64,
        max: f64,
    },
    #[error("full-period length axis must lie in [L, ∞), lower bound {min} < L = {length}")]
    PeriodBelowLength { min: f64, length: f64 },
    #[error("sigma axis must lie in [-1, 1], got [{min}, {max}]")]
    Sigma { min: f64, max: f64 },
    #[error("expected {expected} axes for this mode, got {got}")]
    Dimension { expected: usize, got: usize },
}

/// Planar or semi-spatial steering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Planar,
    SemiSpatial,
}

impl Mode {
    pub fn dim(self) -> usize {
        match self {
            Mode::Planar => 6,
            Mode::SemiSpatial => 9,
        }
    }

    pub fn axis_names(self) -> &'static [&'static str] {
        match self {
            Mode::Planar => &PLANAR_AXES,
            Mode::SemiSpatial => &SPATIAL_AXES,
        }
    }

    fn is_angle(self, axis: usize) -> bool {
        match self {
            Mode::Planar => axis == 2,
            Mode::SemiSpatial => (3..=5).contains(&axis),
        }
    }
}

pub const PLANAR_AXES: [&str; 6] = ["x0", "y0", "phi_base", "sigma", "s0", "l_tilde"];
pub const SPATIAL_AXES: [&str; 9] = [
    "x0", "y0", "z0", "phi_x", "phi_y", "phi_base", "sigma", "s0", "l_tilde",
];

/// One gridded coordinate: values `min + i·step` for `i = 0, 1, …` up to `max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(min: f64, max: f64, step: f64) -> Self {
        Self { min, max, step }
    }

    /// Number of grid values on the axis.
    pub fn count(&self) -> i32 {
        ((self.max - self.min) / self.step + 1e-9).floor() as i32 + 1
    }

    #[inline]
    pub fn value(&self, i: i32) -> f64 {
        self.min + i as f64 * self.step
    }

    fn fractional_index(&self, v: f64) -> f64 {
        (v - self.min) / self.step
    }
}

/// Integer grid coordinates; unused trailing slots stay zero in 6-D.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Cell(pub [i32; 9]);

/// Configuration grid. Axes are stored in canonical order, see
/// [`PLANAR_AXES`] and [`SPATIAL_AXES`]. The modulus is gridded through
/// `σ = 1 - 2k²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub mode: Mode,
    pub axes: Vec<Axis>,
}

const ON_GRID_TOL: f64 = 1e-6;

impl GridSpec {
    pub fn new(mode: Mode, axes: Vec<Axis>) -> Self {
        Self { mode, axes }
    }

    /// Grid with the default resolutions: 1 cm positions, 2° angles,
    /// `ΔL̃ = 0.03L` over `[L, 4L]`, `Δs0 = 0.01L`, `Δσ = 0.015`.
    ///
    /// Position axes span the given bounds; angle axes cover `(-π, π]`.
    pub fn with_default_resolution(
        mode: Mode,
        length: f64,
        position_bounds: &[(f64, f64)],
    ) -> Self {
        let pos = |i: usize| {
            let (lo, hi) = position_bounds.get(i).copied().unwrap_or((0.0, 0.0));
            Axis::new(lo, hi, 0.01)
        };
        let deg2 = 2.0_f64.to_radians();
        let angle = Axis::new(-PI + deg2, PI, deg2);
        let sigma = Axis::new(1.0 - 100.0 * 0.015, 1.0, 0.015);
        let s0 = Axis::new(0.0, 4.0 * length, 0.01 * length);
        let lt = Axis::new(length, 4.0 * length, 0.03 * length);
        let axes = match mode {
            Mode::Planar => vec![pos(0), pos(1), angle, sigma, s0, lt],
            Mode::SemiSpatial => vec![pos(0), pos(1), pos(2), angle, angle, angle, sigma, s0, lt],
        };
        Self { mode, axes }
    }

    pub fn dim(&self) -> usize {
        self.mode.dim()
    }

    pub fn validate(&self, length: f64) -> Result<(), GridError> {
        if self.axes.len() != self.dim() {
            return Err(GridError::Dimension {
                expected: self.dim(),
                got: self.axes.len(),
            });
        }
        let names = self.mode.axis_names();
        for (axis, name) in self.axes.iter().zip(names) {
            if !(axis.step.is_finite() && axis.step > 0.0) {
                return Err(GridError::Step {
                    axis: name,
                    step: axis.step,
                });
            }
            if !(axis.min.is_finite() && axis.max.is_finite() && axis.min <= axis.max) {
                return Err(GridError::Bounds {
                    axis: name,
                    min: axis.min,
                    max: axis.max,
                });
            }
        }
        let lt = self.axes[self.dim() - 1];
        if lt.min < length * (1.0 - 1e-12) {
            return Err(GridError::PeriodBelowLength {
                min: lt.min,
                length,
            });
        }
        let sigma = self.axes[self.dim() - 3];
        if sigma.min < -1.0 || sigma.max > 1.0 {
            return Err(GridError::Sigma {
                min: sigma.min,
                max: sigma.max,
            });
        }
        Ok(())
    }

    /// Half-step fattening of the excluded full-period phases. A frozen
    /// axis (a single value) gets no fattening beyond rounding noise.
    pub fn exclusion_tolerance(&self) -> ExclusionTolerance {
        let d = self.dim();
        let half_step = |a: &Axis| {
            if a.count() > 1 {
                0.5 * a.step
            } else {
                1e-12 * a.min.abs().max(a.max.abs()).max(1.0)
            }
        };
        ExclusionTolerance {
            length: half_step(&self.axes[d - 1]),
            phase: half_step(&self.axes[d - 2]),
        }
    }

    pub fn in_bounds(&self, cell: &Cell) -> bool {
        self.axes
            .iter()
            .zip(cell.0.iter())
            .all(|(a, &i)| i >= 0 && i < a.count())
    }

    /// Coordinate values of a cell, or `None` outside the grid. The phase
    /// must also satisfy `s0 < L̃`.
    pub fn values(&self, cell: &Cell) -> Option<Vec<f64>> {
        if !self.in_bounds(cell) {
            return None;
        }
        let v: Vec<f64> = self
            .axes
            .iter()
            .zip(cell.0.iter())
            .map(|(a, &i)| a.value(i))
            .collect();
        let d = self.dim();
        if v[d - 2] >= v[d - 1] * (1.0 - 1e-12) {
            return None;
        }
        Some(v)
    }

    pub fn config_at(&self, cell: &Cell) -> Option<Config> {
        let v = self.values(cell)?;
        let d = self.dim();
        let params = ElasticaParams::from_sigma(v[d - 3], v[d - 2], v[d - 1]).ok()?;
        match self.mode {
            Mode::Planar => Config2D::new(v[0], v[1], v[2], params)
                .ok()
                .map(Config::Planar),
            Mode::SemiSpatial => Config3D::new(v[0], v[1], v[2], v[3], v[4], v[5], params)
                .ok()
                .map(Config::Spatial),
        }
    }

    /// Raw coordinates of a configuration in axis order.
    pub fn coordinates(&self, config: &Config) -> Option<Vec<f64>> {
        let p = config.params();
        let tail = [p.sigma(), p.s0(), p.l_tilde()];
        match (self.mode, config) {
            (Mode::Planar, Config::Planar(c)) => {
                let mut v = vec![c.x0, c.y0, c.phi_base];
                v.extend(tail);
                Some(v)
            }
            (Mode::SemiSpatial, Config::Spatial(c)) => {
                let mut v = vec![c.x0, c.y0, c.z0, c.phi_x, c.phi_y, c.phi_base];
                v.extend(tail);
                Some(v)
            }
            _ => None,
        }
    }

    /// Grid cell of an on-grid configuration.
    pub fn cell_of(&self, config: &Config) -> Option<Cell> {
        let coords = self.coordinates(config)?;
        let mut cell = Cell::default();
        for (i, (axis, &v)) in self.axes.iter().zip(coords.iter()).enumerate() {
            let candidates: &[f64] = if self.mode.is_angle(i) {
                &[v, v - 2.0 * PI, v + 2.0 * PI]
            } else {
                &[v]
            };
            let idx = candidates.iter().find_map(|&c| {
                let f = axis.fractional_index(c);
                let r = f.round();
                ((f - r).abs() <= ON_GRID_TOL && r >= 0.0 && (r as i32) < axis.count())
                    .then_some(r as i32)
            })?;
            cell.0[i] = idx;
        }
        Some(cell)
    }

    /// Nearest in-bounds cell (angles wrapped onto the axis when possible).
    pub fn nearest_cell(&self, config: &Config) -> Option<Cell> {
        let coords = self.coordinates(config)?;
        let mut cell = Cell::default();
        for (i, (axis, &v)) in self.axes.iter().zip(coords.iter()).enumerate() {
            let mut best = (f64::INFINITY, 0);
            let candidates: &[f64] = if self.mode.is_angle(i) {
                &[v, v - 2.0 * PI, v + 2.0 * PI]
            } else {
                &[v]
            };
            for &c in candidates {
                let r = axis
                    .fractional_index(c)
                    .round()
                    .clamp(0.0, (axis.count() - 1) as f64);
                let err = (axis.value(r as i32) - c).abs();
                if err < best.0 {
                    best = (err, r as i32);
                }
            }
            cell.0[i] = best.1;
        }
        Some(cell)
    }

    /// In-bounds cells one step away along each axis, in axis order
    /// (`-` before `+`).
    pub fn neighbor_cells(&self, cell: &Cell) -> Vec<Cell> {
        let mut out = Vec::with_capacity(2 * self.dim());
        for axis in 0..self.dim() {
            for delta in [-1, 1] {
                let mut n = *cell;
                n.0[axis] += delta;
                if self.in_bounds(&n) {
                    out.push(n);
                }
            }
        }
        out
    }

    /// Two cells differ by exactly one step along exactly one axis.
    pub fn adjacent(&self, a: &Cell, b: &Cell) -> bool {
        let diffs: Vec<i32> =
            a.0.iter()
                .zip(b.0.iter())
                .map(|(x, y)| (x - y).abs())
                .collect();
        diffs.iter().sum::<i32>() == 1
    }
}

/// The up-to-12 (6-D) or 18 (9-D) grid neighbours of an on-grid
/// configuration that stay inside the grid and inside the free set.
pub fn neighbors(config: &Config, grid: &GridSpec, length: f64) -> Vec<Config> {
    let Some(cell) = grid.cell_of(config) else {
        return Vec::new();
    };
    let tol = grid.exclusion_tolerance();
    grid.neighbor_cells(&cell)
        .iter()
        .filter_map(|c| grid.config_at(c))
        .filter(|q| in_c_free(q.params(), length, tol))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elastica::PlanarGrip;

    fn params(k: f64, s0: f64, lt: f64) -> ElasticaParams {
        ElasticaParams::new(k, s0, lt).unwrap()
    }

    const L: f64 = 1.0;

    fn tight() -> ExclusionTolerance {
        ExclusionTolerance::exact(L)
    }

    #[test]
    fn stability_examples() {
        let lt = 1.2 * L;
        assert!(in_c_stable(&params(0.5, 0.3 * lt, lt), L, tight()));
        assert!(!in_c_stable(&params(0.95, 0.3 * lt, lt), L, tight()));
        assert!(!in_c_stable(&params(0.5, 0.25 * L, L), L, tight()));
        assert!(!in_c_stable(&params(0.5, 0.75 * L, L), L, tight()));
        assert!(in_c_stable(&params(0.5, 0.5 * L, L), L, tight()));
        assert!(!in_c_stable(&params(0.5, 0.1, 0.9 * L), L, tight()));
    }

    #[test]
    fn free_set_examples() {
        assert!(in_c_stable(&params(0.88, 0.1, 1.1), L, tight()));
        assert!(!in_c_free(&params(0.88, 0.1, 1.1), L, tight()));
        assert!(in_c_free(&params(0.0, 0.4, 1.0), L, tight()));
        assert!(in_c_free(&params(0.0, 2.0, 3.0), L, tight()));
        assert!(in_c_free(&params(0.85, 0.2, 1.1 * L), L, tight()));
    }

    #[test]
    fn exclusion_fattening() {
        let tol = ExclusionTolerance {
            length: 0.015,
            phase: 0.005,
        };
        assert!(!in_c_free(&params(0.3, 0.254, 1.01), L, tol));
        assert!(in_c_free(&params(0.3, 0.26, 1.01), L, tol));
        assert!(in_c_free(&params(0.3, 0.25, 1.03), L, tol));
    }

    #[test]
    fn grip_feasibility_boundary() {
        let g = |d: f64| {
            GripState::Planar(PlanarGrip {
                p0: [0.0, 0.0],
                phi0: 0.0,
                p_l: [d, 0.0],
                phi_l: 0.0,
            })
        };
        assert!(grip_feasible(&g(0.0), L));
        assert!(grip_feasible(&g(L), L));
        assert!(!grip_feasible(&g(1.01 * L), L));
    }

    #[test]
    fn straight_and_strongly_bent_self_intersection() {
        assert!(!self_intersects(&params(0.0, 0.0, 1.0), 1.0));
        assert!(self_intersects(&params(0.9, 0.0, 1.0), 1.0));
        assert!(!self_intersects(&params(0.8, 0.0, 1.0), 1.0));
    }

    fn planar_grid() -> GridSpec {
        GridSpec::new(
            Mode::Planar,
            vec![
                Axis::new(-1.0, 1.0, 0.1),
                Axis::new(-1.0, 1.0, 0.1),
                Axis::new(-PI + 0.1, PI, 0.1),
                Axis::new(-0.5, 1.0, 0.015),
                Axis::new(0.0, 4.0, 0.01),
                Axis::new(1.0, 4.0, 0.03),
            ],
        )
    }

    #[test]
    fn interior_point_has_twelve_neighbors() {
        let grid = planar_grid();
        let mut cell = Cell::default();
        cell.0[..6].copy_from_slice(&[10, 10, 30, 80, 30, 10]);
        let q = grid.config_at(&cell).unwrap();
        assert_eq!(grid.cell_of(&q), Some(cell));
        assert_eq!(neighbors(&q, &grid, L).len(), 12);
    }

    #[test]
    fn modulus_bound_clips_neighbors() {
        let grid = planar_grid();
        // σ index whose k is just below k_max: one more step down in σ
        // (larger k) leaves the free set.
        let sigma_axis = grid.axes[3];
        let idx = (0..sigma_axis.count())
            .find(|&i| crate::elastica::k_from_sigma(sigma_axis.value(i)) < K_MAX)
            .unwrap();
        let mut cell = Cell::default();
        cell.0[..6].copy_from_slice(&[10, 10, 30, idx, 30, 10]);
        let q = grid.config_at(&cell).unwrap();
        assert!(in_c_free(q.params(), L, grid.exclusion_tolerance()));
        assert_eq!(neighbors(&q, &grid, L).len(), 11);
    }

    #[test]
    fn spatial_interior_point_has_eighteen_neighbors() {
        let a = Axis::new(-1.0, 1.0, 0.1);
        let ang = Axis::new(-PI + 0.1, PI, 0.1);
        let grid = GridSpec::new(
            Mode::SemiSpatial,
            vec![
                a,
                a,
                a,
                ang,
                ang,
                ang,
                Axis::new(-0.5, 1.0, 0.015),
                Axis::new(0.0, 4.0, 0.01),
                Axis::new(1.0, 4.0, 0.03),
            ],
        );
        let cell = Cell([5, 5, 5, 30, 30, 30, 80, 30, 10]);
        let q = grid.config_at(&cell).unwrap();
        assert_eq!(neighbors(&q, &grid, L).len(), 18);
    }

    #[test]
    fn grid_validation() {
        let mut grid = planar_grid();
        assert!(grid.validate(L).is_ok());
        grid.axes[5].min = 0.5;
        assert!(matches!(
            grid.validate(L),
            Err(GridError::PeriodBelowLength { .. })
        ));
        let mut grid = planar_grid();
        grid.axes[0].step = 0.0;
        assert!(matches!(grid.validate(L), Err(GridError::Step { .. })));
        let mut grid = planar_grid();
        grid.axes[1].max = -2.0;
        assert!(matches!(grid.validate(L), Err(GridError::Bounds { .. })));
        let mut grid = planar_grid();
        grid.axes.pop();
        assert!(matches!(grid.validate(L), Err(GridError::Dimension { .. })));
    }

    #[test]
    fn phase_beyond_period_is_off_grid() {
        let grid = planar_grid();
        let mut cell = Cell::default();
        // s0 = 1.2 with L̃ = 1.0
        cell.0[..6].copy_from_slice(&[10, 10, 30, 80, 120, 0]);
        assert!(grid.config_at(&cell).is_none());
    }

    #[test]
    fn angle_snapping_wraps() {
        let grid = planar_grid();
        let mut cell = Cell::default();
        cell.0[..6].copy_from_slice(&[10, 10, 61, 80, 30, 10]);
        let q = grid.config_at(&cell).unwrap();
        assert_eq!(grid.cell_of(&q), Some(cell));
        assert_eq!(grid.nearest_cell(&q), Some(cell));
    }
}
