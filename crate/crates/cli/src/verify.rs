//! Verification suites. Each check recomputes a published constant or
//! compares the closed-form machinery against an independent oracle, and
//! reports a pass/fail verdict with a deterministic detail line.

use std::collections::{HashMap, VecDeque};
use std::time::Instant;

use elastica_steer::collision::{collides_2d_with, collides_3d_with, CollisionOptions};
use elastica_steer::cspace::{Cell, GridSpec, K_C};
use elastica_steer::elastica::{
    derive, hamiltonian, CableProperties, CableShape, Config2D, ElasticaParams, SpatialShape,
};
use elastica_steer::elliptic::{EllipticKernel, Modulus};
use elastica_steer::energy::{
    elastic_energy, gravity_ratio, stability_survey, zip_tie_example, SurveySpec,
};
use elastica_steer::oracle;
use elastica_steer::planner::{plan, validate_path, Path};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::corpus::{config_2d, config_3d, rng, scene_2d, scene_3d};
use crate::files::{ConfigFile, PathFile};
use crate::scene::{parse_scene, Scene};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub criterion: u8,
    pub name: &'static str,
    pub pass: bool,
    /// Deterministic summary; never contains timings.
    pub detail: String,
    /// Wall-clock limit for the check, if any.
    pub budget_s: Option<f64>,
    #[serde(skip)]
    pub runtime_s: f64,
}

impl Check {
    /// Pass/fail including the time budget.
    pub fn ok(&self) -> bool {
        self.pass && self.budget_s.is_none_or(|b| self.runtime_s <= b)
    }

    pub fn line(&self) -> String {
        let over = match self.budget_s {
            Some(b) if self.runtime_s > b => format!(", over the {b} s budget"),
            _ => String::new(),
        };
        format!(
            "criterion {:>2} {:<24} {}  {} ({:.2} s{over})",
            self.criterion,
            self.name,
            if self.ok() { "PASS" } else { "FAIL" },
            self.detail,
            self.runtime_s
        )
    }
}

fn timed(
    criterion: u8,
    name: &'static str,
    budget_s: Option<f64>,
    f: impl FnOnce() -> (bool, String),
) -> Check {
    let t = Instant::now();
    let (pass, detail) = f();
    Check {
        criterion,
        name,
        pass,
        detail,
        budget_s,
        runtime_s: t.elapsed().as_secs_f64(),
    }
}

/// Corpus sizes and seed shared by the randomized checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corpus {
    pub seed: u64,
    pub elliptic_samples: usize,
    pub shapes: usize,
    pub energies: usize,
    pub scenes_2d: usize,
    pub scenes_3d: usize,
}

impl Corpus {
    pub fn full(seed: u64) -> Self {
        Self {
            seed,
            elliptic_samples: 10_000,
            shapes: 1000,
            energies: 1000,
            scenes_2d: 1000,
            scenes_3d: 1000,
        }
    }

    pub fn quick(seed: u64) -> Self {
        Self {
            seed,
            elliptic_samples: 2000,
            shapes: 100,
            energies: 100,
            scenes_2d: 100,
            scenes_3d: 100,
        }
    }
}

/// Identities, periodicity and quasi-periodicity at `1e-11`.
pub fn elliptic_identities(corpus: &Corpus) -> Check {
    timed(1, "elliptic identities", Some(5.0), || {
        let mut r = rng(corpus.seed);
        let samples: Vec<(f64, f64)> = (0..corpus.elliptic_samples)
            .map(|_| (r.gen_range(-60.0..60.0), r.gen_range(0.0..=0.99)))
            .collect();
        let worst = samples
            .iter()
            .map(|&(u, k)| {
                let kernel = EllipticKernel::new(Modulus::new(k).expect("k in range"));
                let (kk, ee) = (kernel.complete_k(), kernel.complete_e());
                let j = kernel.jacobi(u);
                let j4 = kernel.jacobi(u + 4.0 * kk);
                let j2 = kernel.jacobi(u + 2.0 * kk);
                let eps = kernel.epsilon(u);
                let eps2 = kernel.epsilon(u + 2.0 * kk);
                [
                    (j.sn * j.sn + j.cn * j.cn - 1.0).abs(),
                    (j.dn * j.dn + k * k * j.sn * j.sn - 1.0).abs(),
                    (j4.sn - j.sn).abs(),
                    (j4.cn - j.cn).abs(),
                    (j2.dn - j.dn).abs(),
                    (j2.sn + j.sn).abs(),
                    (eps2 - eps - 2.0 * ee).abs() / eps.abs().max(1.0),
                ]
                .into_iter()
                .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        (
            worst <= 1e-11,
            format!(
                "worst residual {worst:.2e} over {} (u, k) samples, limit 1e-11",
                samples.len()
            ),
        )
    })
}

/// Root of `2E(k) = K(k)` and closure of the full-period shape there.
pub fn figure_eight() -> Check {
    timed(2, "figure-eight constant", Some(1.0), || {
        let k = oracle::figure_eight_modulus();
        let gap = (0..32)
            .map(|i| {
                let s0 = i as f64 / 32.0;
                let cfg = Config2D::new(
                    0.0,
                    0.0,
                    0.0,
                    ElasticaParams::new(k, s0, 1.0).expect("valid"),
                )
                .expect("valid");
                CableShape::new(&cfg, 1.0).position(1.0).norm()
            })
            .fold(0.0, f64::max);
        let pass = (0.9085..=0.9095).contains(&k) && gap < 1e-8;
        (
            pass,
            format!(
                "k_c = {k:.10} (window [0.9085, 0.9095], published {K_C}); worst closure gap {gap:.2e} L over 32 phases, limit 1e-8 L"
            ),
        )
    })
}

/// Bisection on the polyline self-intersection oracle.
pub fn self_touch() -> Check {
    timed(3, "self-touch constant", Some(30.0), || {
        let phases: Vec<f64> = (0..8).map(|i| i as f64 / 8.0).collect();
        let (a, b) = oracle::first_self_touch_bracket(&phases, 1e-5);
        let pass = a >= 0.852 && b <= 0.858;
        (
            pass,
            format!("first self-touch in [{a:.5}, {b:.5}] over 8 phases (window [0.852, 0.858], published 0.855)"),
        )
    })
}

const RK_STEPS: usize = 10_000;

/// Closed-form shapes against RK4 integration of the curvature.
pub fn shapes_vs_rk4(corpus: &Corpus) -> Check {
    timed(4, "shape vs RK4", Some(60.0), || {
        let length = 1.0;
        let mut r = rng(corpus.seed ^ 0x4);
        let planar: Vec<_> = (0..corpus.shapes)
            .map(|_| config_2d(&mut r, length))
            .collect();
        let spatial: Vec<_> = (0..corpus.shapes)
            .map(|_| config_3d(&mut r, length))
            .collect();
        let e2 = planar
            .par_iter()
            .map(|c| {
                let (end, _) = oracle::integrate_shape_rk4(c, length, RK_STEPS);
                (end - CableShape::new(c, length).position(length)).norm()
            })
            .reduce(|| 0.0, f64::max);
        let e3 = spatial
            .par_iter()
            .map(|c| {
                let shape = SpatialShape::new(c, length);
                let (end, _) = oracle::integrate_shape_rk4(&c.in_plane(), length, RK_STEPS);
                (shape.frame().to_world(end) - shape.position(length)).norm()
            })
            .reduce(|| 0.0, f64::max);
        let worst = e2.max(e3);
        (
            worst < 1e-6 * length,
            format!(
                "worst endpoint error {e2:.2e} L (2-D), {e3:.2e} L (3-D) over {} configs each, limit 1e-6 L",
                corpus.shapes
            ),
        )
    })
}

/// Closed-form energy against quadrature, and constancy of the Hamiltonian.
pub fn energy_and_hamiltonian(corpus: &Corpus) -> Check {
    timed(5, "energy and Hamiltonian", None, || {
        let mut r = rng(corpus.seed ^ 0x5);
        let cases: Vec<(Config2D, CableProperties)> = (0..corpus.energies)
            .map(|_| {
                let length = r.gen_range(0.2..2.0);
                let props = CableProperties::new(length, r.gen_range(1e-3..1e-1), 0.013, 9.81)
                    .expect("valid");
                (config_2d(&mut r, length), props)
            })
            .collect();
        let (e_rel, h_rel) = cases
            .par_iter()
            .map(|(c, props)| {
                let j = elastic_energy(&c.params, props);
                let q = oracle::elastic_energy_quadrature(&c.params, props);
                let e = if q > 0.0 { (j - q).abs() / q } else { j.abs() };
                let d = derive(&c.params, c.phi_base, props);
                let scale = props.ei * d.lambda;
                let h = (0..50)
                    .map(|i| {
                        let s = props.length * i as f64 / 49.0;
                        (hamiltonian(c, props, s).expect("s in range") - d.h_star).abs() / scale
                    })
                    .fold(0.0, f64::max);
                (e, h)
            })
            .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
        (
            e_rel <= 1e-8 && h_rel <= 1e-9,
            format!(
                "energy vs quadrature {e_rel:.2e} (limit 1e-8), Hamiltonian drift {h_rel:.2e} EI·λ (limit 1e-9), {} configs",
                cases.len()
            ),
        )
    })
}

/// Ratios printed for the zip-tie example, keyed by cable length.
pub const ZIP_TIE_PUBLISHED: [(f64, f64); 2] = [(0.5, 0.0047), (1.0, 0.0375)];

/// The zip-tie gravity ratios against the published values (within a
/// factor of two), and exact linearity of `J_G` in `ρ` and `g`.
pub fn gravity_criterion() -> Check {
    timed(6, "gravity ratio", None, || {
        let mut notes = Vec::new();
        let mut in_band = true;
        let mut linear = true;
        for (length, published) in ZIP_TIE_PUBLISHED {
            let (cfg, props) = zip_tie_example(length);
            let base = gravity_ratio(&cfg, &props);
            let ratio = base.ratio.expect("bent cable");
            let ok = ratio >= 0.5 * published && ratio <= 2.0 * published;
            in_band &= ok;
            notes.push(format!(
                "L={length} m: {ratio:.5} vs {published} (x{:.2}{})",
                ratio / published,
                if ok { "" } else { ", outside x2" }
            ));
            for (fr, fg) in [(2.0, 1.0), (1.0, 0.5), (3.0, 2.0)] {
                let p = CableProperties {
                    rho: props.rho * fr,
                    g: props.g * fg,
                    ..props
                };
                let b = gravity_ratio(&cfg, &p);
                let f = fr * fg;
                linear &= (b.j_g - f * base.j_g).abs() <= 1e-12 * f * base.j_g;
                linear &= (b.ratio.expect("bent") - f * ratio).abs() <= 1e-12 * f * ratio;
            }
        }
        (
            in_band && linear,
            format!(
                "{}; linearity in rho and g {}",
                notes.join(", "),
                if linear { "exact" } else { "BROKEN" }
            ),
        )
    })
}

fn digest_lines<I: IntoIterator<Item = String>>(lines: I) -> String {
    let mut h = Sha256::new();
    for l in lines {
        h.update(l.as_bytes());
        h.update(b"\n");
    }
    hex::encode(&h.finalize()[..8])
}

/// Verdicts against dense polyline / signed-distance oracles on scenes
/// with clearance above `1e-4 m`, and pruning on/off agreement.
pub fn collision_agreement(corpus: &Corpus) -> Check {
    const GUARD: f64 = 1e-4;
    timed(7, "collision vs oracle", Some(120.0), || {
        let length = 1.0;
        let opts = CollisionOptions::default();
        let unpruned = CollisionOptions {
            pruning: false,
            ..opts
        };
        let mut r = rng(corpus.seed ^ 0x7);
        let planar: Vec<_> = (0..corpus.scenes_2d)
            .map(|_| {
                let c = config_2d(&mut r, length);
                let s = scene_2d(&mut r, &c, length);
                (c, s)
            })
            .collect();
        let spatial: Vec<_> = (0..corpus.scenes_3d)
            .map(|_| {
                let c = config_3d(&mut r, length);
                let s = scene_3d(&mut r, &c, length);
                (c, s)
            })
            .collect();
        // (checked, agreed, colliding, pruning matches, verdict string)
        let rows2: Vec<(bool, bool, bool, bool, String)> = planar
            .par_iter()
            .map(|(c, s)| {
                let a = collides_2d_with(c, length, s, &opts);
                let b = collides_2d_with(c, length, s, &unpruned);
                let o = oracle::collides_2d(c, length, s);
                let checked = o.clearance > GUARD;
                let line = format!(
                    "{}{}",
                    a.colliding() as u8,
                    a.witness.map_or(String::new(), |w| format!(":{:.6}", w.s))
                );
                (
                    checked,
                    a.colliding() == o.colliding,
                    a.colliding(),
                    a == b,
                    line,
                )
            })
            .collect();
        let rows3: Vec<(bool, bool, bool, bool, String)> = spatial
            .par_iter()
            .map(|(c, s)| {
                let a = collides_3d_with(c, length, s, &opts);
                let b = collides_3d_with(c, length, s, &unpruned);
                let o = oracle::collides_3d(c, length, s);
                let checked = o.clearance > GUARD;
                let line = format!(
                    "{}{}",
                    a.colliding() as u8,
                    a.witness.map_or(String::new(), |w| format!(":{:.6}", w.s))
                );
                (
                    checked,
                    a.colliding() == o.colliding,
                    a.colliding(),
                    a == b,
                    line,
                )
            })
            .collect();
        let tally = |rows: &[(bool, bool, bool, bool, String)]| {
            let checked = rows.iter().filter(|r| r.0).count();
            let agreed = rows.iter().filter(|r| r.0 && r.1).count();
            let hits = rows.iter().filter(|r| r.0 && r.2).count();
            let pruning = rows.iter().all(|r| r.3);
            (checked, agreed, hits, pruning)
        };
        let (c2, a2, h2, p2) = tally(&rows2);
        let (c3, a3, h3, p3) = tally(&rows3);
        let digest = digest_lines(rows2.iter().chain(&rows3).map(|r| r.4.clone()));
        (
            c2 == a2 && c3 == a3 && p2 && p3,
            format!(
                "2-D {a2}/{c2} agree ({h2} colliding), 3-D {a3}/{c3} agree ({h3} colliding), pruning on/off {}; verdicts {digest}",
                if p2 && p3 { "identical" } else { "DIFFER" }
            ),
        )
    })
}

/// Desk-scale survey: every mixed bin's cheapest full-period shape sits
/// below `k_c`.
pub fn survey_separation() -> Check {
    timed(8, "stability survey", Some(300.0), || {
        let props = CableProperties::new(1.0, 0.0027, 0.013, 9.81).expect("valid");
        let survey = stability_survey(&SurveySpec::desk_scale(1.0), &props);
        let mixed: Vec<_> = survey.bins.iter().filter(|b| b.mixed).collect();
        let bad = mixed
            .iter()
            .filter(|b| b.min_full_below_kc != Some(true))
            .count();
        let digest = digest_lines(
            survey
                .rows
                .iter()
                .map(|r| format!("{:?} {} {} {} {}", r.kind, r.k, r.s0, r.l_tilde, r.j)),
        );
        (
            !mixed.is_empty() && bad == 0,
            format!(
                "{} shapes in {} bins, {} mixed, {} with the minimum above k_c; table {digest}",
                survey.rows.len(),
                survey.bins.len(),
                mixed.len(),
                bad
            ),
        )
    })
}

pub const TWO_BOX_SCENE: &str = include_str!("../../../scenes/two_boxes.json");
pub const TWO_BOX_START: &str = include_str!("../../../scenes/two_boxes_start.json");
pub const TWO_BOX_TARGET: &str = include_str!("../../../scenes/two_boxes_target.json");
pub const FROZEN_SCENE: &str = include_str!("../../../scenes/two_boxes_frozen.json");
pub const FROZEN_TARGET: &str = include_str!("../../../scenes/two_boxes_frozen_target.json");

fn plan_scene(scene: &Scene, start: &str, target: &str, w: Option<f64>) -> Result<Path, String> {
    let a = ConfigFile::parse(start).map_err(|e| e.to_string())?;
    let b = ConfigFile::parse(target).map_err(|e| e.to_string())?;
    let a = a.to_config_in(scene.mode()).map_err(|e| e.to_string())?;
    let b = b.to_config_in(scene.mode()).map_err(|e| e.to_string())?;
    let mut params = scene.params.clone();
    if let Some(w) = w {
        params.w = w;
    }
    plan(&a, &b, &scene.env, &params).map_err(|e| e.to_string())
}

/// Hop count of the shortest admissible path, by breadth-first search.
fn bfs_hops(scene: &Scene, grid: &GridSpec, from: Cell, to: Cell) -> Option<usize> {
    let mut seen: HashMap<Cell, usize> = HashMap::from([(from, 0)]);
    let mut queue = VecDeque::from([from]);
    while let Some(c) = queue.pop_front() {
        let d = seen[&c];
        if c == to {
            return Some(d);
        }
        for n in grid.neighbor_cells(&c) {
            if seen.contains_key(&n) {
                continue;
            }
            let q = grid.config_at(&n).expect("in bounds");
            if scene.env.check(&q, grid).is_ok() {
                seen.insert(n, d + 1);
                queue.push_back(n);
            }
        }
    }
    None
}

/// The two-box planar scene, and uniform-cost search against BFS on a
/// frozen-shape copy of it.
pub fn planner_two_box() -> Check {
    timed(9, "planner two-box", Some(60.0), || {
        let scene = parse_scene(TWO_BOX_SCENE).expect("bundled scene parses");
        let (ok_main, main) = match plan_scene(&scene, TWO_BOX_START, TWO_BOX_TARGET, None) {
            Ok(path) => {
                let violations = validate_path(&path.configs, &scene.env, &scene.params.grid);
                let mut file = PathFile::new(&path, scene.digest(), scene.params.clone());
                file.stats.runtime_s = 0.0;
                let digest = &hex::encode(Sha256::digest(file.to_canonical().as_bytes()))[..16];
                (
                    violations.is_empty(),
                    format!(
                        "{} waypoints, cost {:.6}, {} expansions, {} violations, path {digest}",
                        path.configs.len(),
                        path.stats.cost,
                        path.stats.expansions,
                        violations.len()
                    ),
                )
            }
            Err(e) => (false, format!("planning failed: {e}")),
        };

        let frozen = parse_scene(FROZEN_SCENE).expect("bundled scene parses");
        let grid = &frozen.params.grid;
        let (ok_bfs, bfs) = match plan_scene(&frozen, TWO_BOX_START, FROZEN_TARGET, Some(0.0)) {
            Ok(path) => {
                let from = path.cells[0];
                let to = *path.cells.last().expect("nonempty");
                let hops = bfs_hops(&frozen, grid, from, to);
                let step = (2.0_f64).sqrt() * grid.axes[0].step;
                match hops {
                    Some(h) => {
                        let expected = h as f64 * step;
                        let same = (path.stats.cost - expected).abs() <= 1e-12 * expected.max(1.0)
                            && path.cells.len() == h + 1;
                        (
                            same,
                            format!(
                                "w=0 cost {:.12} vs BFS {h} hops = {expected:.12}",
                                path.stats.cost
                            ),
                        )
                    }
                    None => (false, "BFS found no path".into()),
                }
            }
            Err(e) => (false, format!("frozen planning failed: {e}")),
        };
        (ok_main && ok_bfs, format!("{main}; {bfs}"))
    })
}

/// Repeats the collision, survey and planner checks and compares reports.
pub fn determinism(corpus: &Corpus, first: &[Check]) -> Check {
    timed(10, "determinism", None, || {
        let again = [
            collision_agreement(corpus),
            survey_separation(),
            planner_two_box(),
        ];
        let mut same = 0;
        for c in &again {
            if let Some(f) = first.iter().find(|f| f.criterion == c.criterion) {
                if f.detail == c.detail && f.pass == c.pass {
                    same += 1;
                }
            }
        }
        (
            same == again.len(),
            format!("{same}/{} reports byte-identical on rerun", again.len()),
        )
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Elliptic,
    Constants,
    Shape,
    Energy,
    Collision,
    Survey,
    Planner,
    All,
}

pub fn run_suite(suite: Suite, corpus: &Corpus) -> Vec<Check> {
    use Suite::*;
    let want = |s: Suite| suite == s || suite == All;
    let mut out = Vec::new();
    if want(Elliptic) {
        out.push(elliptic_identities(corpus));
    }
    if want(Constants) {
        out.push(figure_eight());
        out.push(self_touch());
    }
    if want(Shape) {
        out.push(shapes_vs_rk4(corpus));
    }
    if want(Energy) {
        out.push(energy_and_hamiltonian(corpus));
        out.push(gravity_criterion());
    }
    if want(Collision) {
        out.push(collision_agreement(corpus));
    }
    if want(Survey) {
        out.push(survey_separation());
    }
    if want(Planner) {
        out.push(planner_two_box());
    }
    if suite == All {
        let d = determinism(corpus, &out);
        out.push(d);
    }
    out
}
