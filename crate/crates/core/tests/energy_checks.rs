mod common;

use common::*;
use elastica_steer::cspace::K_C;
use elastica_steer::elastica::{CableProperties, CableShape, Config2D, ElasticaParams};
use elastica_steer::energy::{
    elastic_energy, gravity_ratio, stability_survey, zip_tie_example, SurveySpec,
};
use elastica_steer::oracle;
use rand::Rng;

#[test]
fn closed_form_matches_quadrature() {
    let mut r = rng(51);
    for _ in 0..1000 {
        let length = r.gen_range(0.2..2.0);
        let props = CableProperties::new(length, r.gen_range(1e-3..1e-1), 0.01, 9.81).unwrap();
        let p = free_params(&mut r, length);
        let j = elastic_energy(&p, &props);
        let q = oracle::elastic_energy_quadrature(&p, &props);
        assert!(
            (j - q).abs() <= 1e-8 * q.abs().max(1e-300),
            "{p:?}: {j} vs {q}"
        );
    }
}

#[test]
fn energy_ignores_the_base_pose() {
    // the closed form never sees the pose; check the quadrature of the placed shape agrees
    let mut r = rng(52);
    let props = CableProperties::new(1.0, 0.0027, 0.013, 9.81).unwrap();
    for _ in 0..50 {
        let c = config_2d(&mut r, 1.0);
        let shape = CableShape::new(&c, 1.0);
        let n = 4000;
        let h = 1.0 / n as f64;
        // composite Simpson on the placed shape
        let sum: f64 = (0..=n)
            .map(|i| {
                let w = if i == 0 || i == n {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w * shape.curvature(i as f64 * h).powi(2)
            })
            .sum();
        let placed = 0.5 * props.ei * sum * h / 3.0;
        let j = elastic_energy(&c.params, &props);
        assert!((placed - j).abs() <= 1e-6 * j.max(1e-12));
    }
}

#[test]
fn figure_eight_closes_for_any_phase() {
    let k = oracle::figure_eight_modulus();
    assert!((0.9085..=0.9095).contains(&k));
    for length in [0.3, 1.0, 2.5] {
        for i in 0..16 {
            let s0 = i as f64 / 16.0 * length;
            let cfg =
                Config2D::new(0.2, -0.1, 0.7, ElasticaParams::new(k, s0, length).unwrap()).unwrap();
            let end = CableShape::new(&cfg, length).position(length);
            let gap = (end - cfg.base()).norm();
            assert!(gap < 1e-8 * length, "s0 = {s0}: {gap:e}");
        }
    }
}

#[test]
fn gravity_ratio_falls_as_stiffness_rises() {
    let (cfg, props) = zip_tie_example(0.5);
    let ratios: Vec<f64> = (0..8)
        .map(|i| {
            let p = CableProperties {
                ei: props.ei * 1.5_f64.powi(i),
                ..props
            };
            gravity_ratio(&cfg, &p).ratio.unwrap()
        })
        .collect();
    assert!(ratios.windows(2).all(|w| w[1] < w[0]), "{ratios:?}");
}

#[test]
fn gravity_energy_is_linear_in_density_and_gravity() {
    for length in [0.5, 1.0] {
        let (cfg, props) = zip_tie_example(length);
        let base = gravity_ratio(&cfg, &props);
        for (rho, g) in [(2.0, 1.0), (1.0, 3.0), (0.5, 0.25)] {
            let p = CableProperties {
                rho: props.rho * rho,
                g: props.g * g,
                ..props
            };
            let b = gravity_ratio(&cfg, &p);
            let f = rho * g;
            assert!((b.j_g - f * base.j_g).abs() <= 1e-12 * f * base.j_g);
            assert!(
                (b.ratio.unwrap() - f * base.ratio.unwrap()).abs()
                    <= 1e-12 * f * base.ratio.unwrap()
            );
            assert_eq!(b.j_e, base.j_e);
        }
    }
}

#[test]
fn desk_survey_separates_at_the_figure_eight() {
    let props = CableProperties::new(1.0, 0.0027, 0.013, 9.81).unwrap();
    let survey = stability_survey(&SurveySpec::desk_scale(1.0), &props);
    let mixed: Vec<_> = survey.bins.iter().filter(|b| b.mixed).collect();
    assert!(!mixed.is_empty());
    for b in &mixed {
        let row = &survey.rows[b.min_full_row.unwrap()];
        assert!(row.k < K_C, "bin {:?}: k = {}", b.bin, row.k);
    }
    let again = stability_survey(&SurveySpec::desk_scale(1.0), &props);
    assert_eq!(survey, again);
}
