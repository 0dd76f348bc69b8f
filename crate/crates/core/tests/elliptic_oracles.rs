use elastica_steer::elliptic::{EllipticKernel, Modulus};
use elastica_steer::oracle::{complete_integrals_quadrature, epsilon_quadrature, jacobi_ode};
use proptest::prelude::*;

fn kernel(k: f64) -> EllipticKernel {
    EllipticKernel::new(Modulus::new(k).unwrap())
}

#[test]
fn complete_integrals_match_quadrature() {
    for i in 0..=99 {
        let k = i as f64 / 100.0;
        let ker = kernel(k);
        let (kq, eq) = complete_integrals_quadrature(k);
        assert!((ker.complete_k() - kq).abs() <= 1e-13 * kq, "K({k})");
        assert!(
            (ker.complete_e() - eq).abs() <= 1e-13 * eq,
            "E({k}): {} vs {eq}",
            ker.complete_e()
        );
    }
}

#[test]
fn epsilon_matches_quadrature() {
    for (u, k) in [
        (0.3, 0.2),
        (2.5, 0.7),
        (7.9, 0.85),
        (-4.2, 0.95),
        (13.0, 0.5),
    ] {
        let a = kernel(k).epsilon(u);
        let b = epsilon_quadrature(u, k);
        assert!(
            (a - b).abs() <= 1e-12 * (1.0 + u.abs()),
            "ε({u}, {k}): {a} vs {b}"
        );
    }
}

#[test]
fn jacobi_matches_ode() {
    for (u, k) in [(0.5, 0.3), (3.0, 0.8), (9.5, 0.9), (6.0, 0.99)] {
        let (sn, cn, dn) = jacobi_ode(u, k, 200_000);
        let j = kernel(k).jacobi(u);
        assert!((j.sn - sn).abs() < 1e-11, "sn({u}, {k})");
        assert!((j.cn - cn).abs() < 1e-11, "cn({u}, {k})");
        assert!((j.dn - dn).abs() < 1e-11, "dn({u}, {k})");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn pythagorean_identities(u in -50.0..50.0f64, k in 0.0..0.99f64) {
        let j = kernel(k).jacobi(u);
        prop_assert!((j.sn * j.sn + j.cn * j.cn - 1.0).abs() < 1e-11);
        prop_assert!((j.dn * j.dn + k * k * j.sn * j.sn - 1.0).abs() < 1e-11);
    }

    #[test]
    fn periodicity(u in -20.0..20.0f64, k in 0.0..0.99f64) {
        let ker = kernel(k);
        let four_k = 4.0 * ker.complete_k();
        let (a, b) = (ker.jacobi(u), ker.jacobi(u + four_k));
        prop_assert!((a.sn - b.sn).abs() < 1e-11);
        prop_assert!((a.cn - b.cn).abs() < 1e-11);
        prop_assert!((a.dn - b.dn).abs() < 1e-11);
        let two_k = 2.0 * ker.complete_k();
        let shifted = ker.epsilon(u + two_k) - ker.epsilon(u) - 2.0 * ker.complete_e();
        prop_assert!(shifted.abs() < 1e-11 * (1.0 + u.abs()));
    }

    #[test]
    fn amplitude_derivative_is_dn(u in -10.0..10.0f64, k in 0.0..0.95f64) {
        let ker = kernel(k);
        let h = 1e-5;
        let d = (ker.jacobi(u + h).am - ker.jacobi(u - h).am) / (2.0 * h);
        prop_assert!((d - ker.jacobi(u).dn).abs() < 1e-8);
    }
}
