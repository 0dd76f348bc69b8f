//! Weighted A* over the configuration grid.
//!
//! Nodes are grid cells. The graph is built lazily: a cell is checked for
//! membership in the free set, workspace bounds and collisions only when
//! it is first generated, and the verdict is memoised. Edge costs and the
//! heuristic are distances between endpoint maps `ψ`.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::collision::{collides_2d_tagged, collides_3d_with, CollisionOptions, Obstacle3D};
use crate::cspace::{grip_feasible, in_c_free, Cell, GridError, GridSpec, Mode};
use crate::elastica::{CableProperties, Config, GripState};
use crate::geometry::{decompose_convex, ConvexPiece, Polygon};

/// Axis-aligned box that both grip positions must stay inside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndpointBounds {
    #[serde(rename = "min_m")]
    pub min: [f64; 3],
    #[serde(rename = "max_m")]
    pub max: [f64; 3],
}

impl EndpointBounds {
    pub fn unbounded() -> Self {
        Self {
            min: [f64::NEG_INFINITY; 3],
            max: [f64::INFINITY; 3],
        }
    }

    pub fn is_nonempty(&self) -> bool {
        self.min
            .iter()
            .zip(&self.max)
            .all(|(a, b)| a <= b && !a.is_nan() && !b.is_nan())
    }

    /// Planar grips are checked on `x` and `y` only.
    pub fn contains(&self, grip: &GripState) -> bool {
        let axes = match grip {
            GripState::Planar(_) => 2,
            GripState::Spatial(_) => 3,
        };
        grip.positions()
            .iter()
            .all(|p| (0..axes).all(|i| p[i] >= self.min[i] && p[i] <= self.max[i]))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Obstacles {
    /// Convex pieces with the index of the polygon each came from.
    Planar {
        pieces: Vec<ConvexPiece>,
        owners: Vec<usize>,
    },
    Spatial(Vec<Obstacle3D>),
}

impl Obstacles {
    pub fn from_polygons(polygons: &[Polygon]) -> Self {
        let mut pieces = Vec::new();
        let mut owners = Vec::new();
        for (i, poly) in polygons.iter().enumerate() {
            for piece in decompose_convex(poly) {
                pieces.push(piece);
                owners.push(i);
            }
        }
        Obstacles::Planar { pieces, owners }
    }
}

/// Everything the planner needs to know about the world.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    pub props: CableProperties,
    pub obstacles: Obstacles,
    pub bounds: EndpointBounds,
    pub collision: CollisionOptions,
}

/// Why a single configuration is unusable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rejection {
    OffGrid,
    WrongMode,
    NotFree,
    GripInfeasible,
    OutOfBounds,
    Collision,
}

impl Environment {
    pub fn new(props: CableProperties, obstacles: Obstacles, bounds: EndpointBounds) -> Self {
        Self {
            props,
            obstacles,
            bounds,
            collision: CollisionOptions::default(),
        }
    }

    pub fn mode(&self) -> Mode {
        match self.obstacles {
            Obstacles::Planar { .. } => Mode::Planar,
            Obstacles::Spatial(_) => Mode::SemiSpatial,
        }
    }

    pub fn collides(&self, config: &Config) -> bool {
        let length = self.props.length;
        match (config, &self.obstacles) {
            (Config::Planar(c), Obstacles::Planar { pieces, owners }) => {
                collides_2d_tagged(c, length, pieces, owners, &self.collision).colliding()
            }
            (Config::Spatial(c), Obstacles::Spatial(obs)) => {
                collides_3d_with(c, length, obs, &self.collision).colliding()
            }
            _ => true,
        }
    }

    /// Full admissibility test with the grid's fattened exclusion set;
    /// returns `ψ` on success.
    pub fn check(&self, config: &Config, grid: &GridSpec) -> Result<GripState, Rejection> {
        let mode_ok = matches!(
            (config, self.mode()),
            (Config::Planar(_), Mode::Planar) | (Config::Spatial(_), Mode::SemiSpatial)
        );
        if !mode_ok {
            return Err(Rejection::WrongMode);
        }
        let length = self.props.length;
        if !in_c_free(config.params(), length, grid.exclusion_tolerance()) {
            return Err(Rejection::NotFree);
        }
        let psi = config.psi(length);
        if !grip_feasible(&psi, length) {
            return Err(Rejection::GripInfeasible);
        }
        if !self.bounds.contains(&psi) {
            return Err(Rejection::OutOfBounds);
        }
        if self.collides(config) {
            return Err(Rejection::Collision);
        }
        Ok(psi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannerParams {
    /// Greediness: `f = (1 - w)·g + w·h`.
    pub w: f64,
    pub grid: GridSpec,
    /// Metres per radian when mixing angles into `ψ` distances.
    pub angle_scale: f64,
    pub max_expansions: usize,
}

pub const DEFAULT_WEIGHT: f64 = 0.88;
pub const DEFAULT_MAX_EXPANSIONS: usize = 2_000_000;

impl PlannerParams {
    pub fn new(grid: GridSpec) -> Self {
        Self {
            w: DEFAULT_WEIGHT,
            grid,
            angle_scale: 1.0,
            max_expansions: DEFAULT_MAX_EXPANSIONS,
        }
    }

    pub fn validate(&self, length: f64) -> Result<(), PlanError> {
        if !(0.0..=1.0).contains(&self.w) {
            return Err(PlanError::Params(format!(
                "w must lie in [0, 1] (got {})",
                self.w
            )));
        }
        if !(self.angle_scale.is_finite() && self.angle_scale > 0.0) {
            return Err(PlanError::Params(format!(
                "angle_scale must be positive (got {})",
                self.angle_scale
            )));
        }
        if self.max_expansions == 0 {
            return Err(PlanError::Params("max_expansions must be positive".into()));
        }
        self.grid.validate(length)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoPathReason {
    /// Every reachable cell was expanded.
    Exhausted,
    /// The expansion budget ran out first.
    Budget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Start,
    Target,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("invalid planner parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("{which:?} configuration is unusable: {reason:?}")]
    InvalidQuery { which: Endpoint, reason: Rejection },
    #[error("{which:?} configuration is too far from the grid to snap (ψ moves {moved:.3e}, limit {limit:.3e})")]
    Snap {
        which: Endpoint,
        moved: f64,
        limit: f64,
    },
    #[error("no path ({reason:?}) after {} expansions", stats.expansions)]
    NoPath {
        reason: NoPathReason,
        stats: SearchStats,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SearchStats {
    pub expansions: usize,
    /// Distinct cells whose admissibility was evaluated.
    pub evaluated: usize,
    pub rejected: usize,
    pub runtime_s: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub cells: Vec<Cell>,
    pub configs: Vec<Config>,
    pub grips: Vec<GripState>,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, Copy)]
struct Key {
    f: f64,
    h: f64,
    cell: Cell,
}

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    /// Reversed so that `BinaryHeap` pops the smallest `(f, h, cell)`.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then(other.h.total_cmp(&self.h))
            .then(other.cell.cmp(&self.cell))
    }
}

struct Node {
    g: f64,
    f: f64,
    h: f64,
    psi: GripState,
    parent: Option<Cell>,
    closed: bool,
}

enum Slot {
    Rejected,
    Open(Node),
}

/// Longest `ψ` displacement caused by a single grid step from `cell`.
fn grid_diagonal(grid: &GridSpec, cell: &Cell, length: f64, angle_scale: f64) -> f64 {
    let Some(here) = grid.config_at(cell) else {
        return 0.0;
    };
    let psi = here.psi(length);
    let mut sum = 0.0;
    for axis in 0..grid.dim() {
        if grid.axes[axis].count() < 2 {
            continue;
        }
        let mut step = *cell;
        step.0[axis] += if cell.0[axis] + 1 < grid.axes[axis].count() {
            1
        } else {
            -1
        };
        if let Some(q) = grid.config_at(&step) {
            let d = psi.distance(&q.psi(length), angle_scale);
            sum += d * d;
        }
    }
    sum.sqrt()
}

fn snap(
    which: Endpoint,
    config: &Config,
    env: &Environment,
    params: &PlannerParams,
) -> Result<Cell, PlanError> {
    let grid = &params.grid;
    let length = env.props.length;
    if let Some(cell) = grid.cell_of(config) {
        return Ok(cell);
    }
    let cell = grid.nearest_cell(config).ok_or(PlanError::InvalidQuery {
        which,
        reason: Rejection::WrongMode,
    })?;
    let snapped = grid.config_at(&cell).ok_or(PlanError::InvalidQuery {
        which,
        reason: Rejection::OffGrid,
    })?;
    let moved = config
        .psi(length)
        .distance(&snapped.psi(length), params.angle_scale);
    let limit = grid_diagonal(grid, &cell, length, params.angle_scale);
    if moved > limit {
        return Err(PlanError::Snap {
            which,
            moved,
            limit,
        });
    }
    Ok(cell)
}

fn admit(
    which: Endpoint,
    cell: &Cell,
    env: &Environment,
    grid: &GridSpec,
) -> Result<(Config, GripState), PlanError> {
    let config = grid.config_at(cell).ok_or(PlanError::InvalidQuery {
        which,
        reason: Rejection::OffGrid,
    })?;
    let psi = env
        .check(&config, grid)
        .map_err(|reason| PlanError::InvalidQuery { which, reason })?;
    Ok((config, psi))
}

/// Searches for a grid path from `start` to `target`. Off-grid endpoints
/// are snapped to the nearest cell when that moves `ψ` by at most one
/// grid diagonal.
pub fn plan(
    start: &Config,
    target: &Config,
    env: &Environment,
    params: &PlannerParams,
) -> Result<Path, PlanError> {
    let clock = Instant::now();
    let length = env.props.length;
    params.validate(length)?;
    let grid = &params.grid;
    if grid.mode != env.mode() {
        return Err(PlanError::InvalidQuery {
            which: Endpoint::Start,
            reason: Rejection::WrongMode,
        });
    }
    let start_cell = snap(Endpoint::Start, start, env, params)?;
    let target_cell = snap(Endpoint::Target, target, env, params)?;
    let (_, start_psi) = admit(Endpoint::Start, &start_cell, env, grid)?;
    let (_, target_psi) = admit(Endpoint::Target, &target_cell, env, grid)?;

    let w = params.w;
    let scale = params.angle_scale;
    let mut stats = SearchStats::default();
    let mut slots: HashMap<Cell, Slot> = HashMap::new();
    let mut heap = BinaryHeap::new();

    let h0 = start_psi.distance(&target_psi, scale);
    let f0 = w * h0;
    slots.insert(
        start_cell,
        Slot::Open(Node {
            g: 0.0,
            f: f0,
            h: h0,
            psi: start_psi,
            parent: None,
            closed: false,
        }),
    );
    heap.push(Key {
        f: f0,
        h: h0,
        cell: start_cell,
    });

    while let Some(key) = heap.pop() {
        let current = key.cell;
        let (g_cur, psi_cur) = match slots.get_mut(&current) {
            Some(Slot::Open(node)) if !node.closed && node.f.total_cmp(&key.f).is_eq() => {
                node.closed = true;
                (node.g, node.psi)
            }
            _ => continue,
        };
        if current == target_cell {
            stats.cost = g_cur;
            stats.runtime_s = clock.elapsed().as_secs_f64();
            return Ok(reconstruct(&slots, current, grid, stats));
        }
        if stats.expansions >= params.max_expansions {
            stats.runtime_s = clock.elapsed().as_secs_f64();
            return Err(PlanError::NoPath {
                reason: NoPathReason::Budget,
                stats,
            });
        }
        stats.expansions += 1;

        let candidates: Vec<Cell> = grid.neighbor_cells(&current);
        let fresh: Vec<Cell> = candidates
            .iter()
            .filter(|c| !slots.contains_key(c))
            .copied()
            .collect();
        let verdicts: Vec<Option<GripState>> = fresh
            .par_iter()
            .map(|c| grid.config_at(c).and_then(|q| env.check(&q, grid).ok()))
            .collect();
        stats.evaluated += fresh.len();
        let mut fresh_psi: HashMap<Cell, GripState> = HashMap::with_capacity(fresh.len());
        for (cell, verdict) in fresh.into_iter().zip(verdicts) {
            match verdict {
                Some(psi) => {
                    fresh_psi.insert(cell, psi);
                }
                None => {
                    stats.rejected += 1;
                    slots.insert(cell, Slot::Rejected);
                }
            }
        }

        for cell in candidates {
            if let Some(psi) = fresh_psi.remove(&cell) {
                let g = g_cur + psi_cur.distance(&psi, scale);
                let h = psi.distance(&target_psi, scale);
                let f = (1.0 - w) * g + w * h;
                slots.insert(
                    cell,
                    Slot::Open(Node {
                        g,
                        f,
                        h,
                        psi,
                        parent: Some(current),
                        closed: false,
                    }),
                );
                heap.push(Key { f, h, cell });
                continue;
            }
            if let Some(Slot::Open(node)) = slots.get_mut(&cell) {
                if node.closed {
                    continue;
                }
                let g = g_cur + psi_cur.distance(&node.psi, scale);
                let f = (1.0 - w) * g + w * node.h;
                if f < node.f {
                    node.g = g;
                    node.f = f;
                    node.parent = Some(current);
                    heap.push(Key { f, h: node.h, cell });
                }
            }
        }
    }
    stats.runtime_s = clock.elapsed().as_secs_f64();
    Err(PlanError::NoPath {
        reason: NoPathReason::Exhausted,
        stats,
    })
}

fn reconstruct(
    slots: &HashMap<Cell, Slot>,
    goal: Cell,
    grid: &GridSpec,
    stats: SearchStats,
) -> Path {
    let mut cells = vec![goal];
    let mut grips = Vec::new();
    let mut cursor = goal;
    loop {
        let Some(Slot::Open(node)) = slots.get(&cursor) else {
            unreachable!("path cell without a node");
        };
        grips.push(node.psi);
        match node.parent {
            Some(p) => {
                cells.push(p);
                cursor = p;
            }
            None => break,
        }
    }
    cells.reverse();
    grips.reverse();
    let configs = cells
        .iter()
        .map(|c| grid.config_at(c).expect("path cell is on the grid"))
        .collect();
    Path {
        cells,
        configs,
        grips,
        stats,
    }
}

/// One problem found by [`validate_path`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Empty,
    Waypoint { index: usize, reason: Rejection },
    NotAdjacent { index: usize },
}

/// Re-checks every waypoint and every step of a path.
pub fn validate_path(configs: &[Config], env: &Environment, grid: &GridSpec) -> Vec<Violation> {
    if configs.is_empty() {
        return vec![Violation::Empty];
    }
    let mut out = Vec::new();
    let mut cells: Vec<Option<Cell>> = Vec::with_capacity(configs.len());
    for (index, q) in configs.iter().enumerate() {
        let cell = grid.cell_of(q);
        cells.push(cell);
        if cell.is_none() {
            out.push(Violation::Waypoint {
                index,
                reason: Rejection::OffGrid,
            });
            continue;
        }
        if let Err(reason) = env.check(q, grid) {
            out.push(Violation::Waypoint { index, reason });
        }
    }
    for (index, pair) in cells.windows(2).enumerate() {
        if let (Some(a), Some(b)) = (pair[0], pair[1]) {
            if !grid.adjacent(&a, &b) {
                out.push(Violation::NotAdjacent { index: index + 1 });
            }
        }
    }
    out
}
