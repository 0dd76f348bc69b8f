//! Complete elliptic integrals and Jacobi elliptic functions.
//!
//! Everything here is driven by the arithmetic-geometric mean (AGM) of
//! `1` and `k' = sqrt(1 - k²)`. The same descending Landen sequence gives
//!
//! * the complete integrals `K(k)` and `E(k)`,
//! * the Jacobi amplitude `am(u, k)` (and with it `sn`, `cn`, `dn`),
//! * the Jacobi zeta function, from which the continuous extension
//!   `ε(u, k) = E(am(u, k), k)` of the incomplete integral of the second
//!   kind follows as `ε(u) = (E/K)·u + Z(u)`.
//!
//! The modulus convention is `k` (not the parameter `m = k²`).

use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

const MAX_AGM_STEPS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EllipticError {
    #[error("elliptic modulus {0} is outside [0, 1)")]
    Domain(f64),
}

/// Elliptic modulus `k`, restricted to the half-open interval `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Modulus(f64);

impl Modulus {
    pub fn new(k: f64) -> Result<Self, EllipticError> {
        if k.is_finite() && (0.0..1.0).contains(&k) {
            Ok(Self(k))
        } else {
            Err(EllipticError::Domain(k))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Complementary modulus `k' = sqrt(1 - k²)`.
    #[inline]
    pub fn complementary(self) -> f64 {
        ((1.0 - self.0) * (1.0 + self.0)).sqrt()
    }
}

impl TryFrom<f64> for Modulus {
    type Error = EllipticError;

    fn try_from(k: f64) -> Result<Self, Self::Error> {
        Self::new(k)
    }
}

/// Jacobi amplitude and the three basic Jacobi elliptic functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobi {
    pub am: f64,
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Precomputed AGM sequence for one modulus.
///
/// Building the kernel costs a handful of square roots; every evaluation
/// afterwards reuses it. The elastica code evaluates many points of the
/// same curve, so it keeps one of these around.
#[derive(Debug, Clone)]
pub struct EllipticKernel {
    k: f64,
    /// `a_n` for `n = 0..=N`.
    a: Vec<f64>,
    /// `c_n` for `n = 0..=N` (`c_0 = k`).
    c: Vec<f64>,
    complete_k: f64,
    complete_e: f64,
}

impl EllipticKernel {
    pub fn new(k: Modulus) -> Self {
        let kv = k.value();
        let mut a = vec![1.0];
        let mut b = k.complementary();
        let mut c = vec![kv];
        // E(k) = K(k) · (1 - Σ 2^(n-1) c_n²)
        let mut weighted = 0.5 * kv * kv;
        let mut pow2 = 0.5;
        for _ in 0..MAX_AGM_STEPS {
            let an = *a.last().unwrap();
            let cn = *c.last().unwrap();
            if cn <= f64::EPSILON * an * 0.5 {
                break;
            }
            let next_a = 0.5 * (an + b);
            let next_c = 0.25 * cn * cn / next_a;
            b = (an * b).sqrt();
            a.push(next_a);
            c.push(next_c);
            pow2 *= 2.0;
            weighted += pow2 * next_c * next_c;
        }
        let a_n = *a.last().unwrap();
        let complete_k = FRAC_PI_2 / a_n;
        let complete_e = complete_k * (1.0 - weighted);
        Self {
            k: kv,
            a,
            c,
            complete_k,
            complete_e,
        }
    }

    #[inline]
    pub fn modulus(&self) -> f64 {
        self.k
    }

    /// Complete integral of the first kind `K(k)`.
    #[inline]
    pub fn complete_k(&self) -> f64 {
        self.complete_k
    }

    /// Complete integral of the second kind `E(k)`.
    #[inline]
    pub fn complete_e(&self) -> f64 {
        self.complete_e
    }

    /// Splits `u = r + 2K·j` with `r ∈ [-K, K]`.
    fn reduce(&self, u: f64) -> (f64, f64) {
        let half_period = 2.0 * self.complete_k;
        let j = (u / half_period).round();
        (u - j * half_period, j)
    }

    /// Descending Landen recursion on a reduced argument. Returns
    /// `am(r)` and the zeta sum `Σ c_n sin φ_n`.
    fn landen(&self, r: f64) -> (f64, f64) {
        let n = self.a.len() - 1;
        if n == 0 {
            return (r, 0.0);
        }
        let mut phi = (1u64 << n) as f64 * self.a[n] * r;
        let mut zeta = 0.0;
        for i in (1..=n).rev() {
            zeta += self.c[i] * phi.sin();
            let t = (self.c[i] / self.a[i] * phi.sin()).clamp(-1.0, 1.0);
            phi = 0.5 * (phi + t.asin());
        }
        (phi, zeta)
    }

    fn jacobi_from(&self, j: f64, am_reduced: f64) -> Jacobi {
        let sign = if j.rem_euclid(2.0) == 0.0 { 1.0 } else { -1.0 };
        let (s, c) = am_reduced.sin_cos();
        let ks = self.k * s;
        Jacobi {
            am: am_reduced + j * PI,
            sn: sign * s,
            cn: sign * c,
            dn: ((1.0 - ks) * (1.0 + ks)).sqrt(),
        }
    }

    pub fn jacobi(&self, u: f64) -> Jacobi {
        let (r, j) = self.reduce(u);
        let (am, _) = self.landen(r);
        self.jacobi_from(j, am)
    }

    /// `ε(u, k) = E(am(u, k), k)`, continuous and quasi-periodic in `u`.
    pub fn epsilon(&self, u: f64) -> f64 {
        self.evaluate(u).1
    }

    /// Jacobi functions and `ε` at the same argument from one recursion.
    pub fn evaluate(&self, u: f64) -> (Jacobi, f64) {
        let (r, j) = self.reduce(u);
        let (am, zeta) = self.landen(r);
        let eps = 2.0 * j * self.complete_e + self.complete_e / self.complete_k * r + zeta;
        (self.jacobi_from(j, am), eps)
    }
}

/// Complete elliptic integral of the first kind.
pub fn complete_k(k: Modulus) -> f64 {
    EllipticKernel::new(k).complete_k()
}

/// Complete elliptic integral of the second kind, `E(π/2, k)`.
pub fn complete_e(k: Modulus) -> f64 {
    EllipticKernel::new(k).complete_e()
}

pub fn jacobi(u: f64, k: Modulus) -> Jacobi {
    EllipticKernel::new(k).jacobi(u)
}

pub fn epsilon(u: f64, k: Modulus) -> f64 {
    EllipticKernel::new(k).epsilon(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(k: f64) -> Modulus {
        Modulus::new(k).unwrap()
    }

    #[test]
    fn rejects_out_of_domain_modulus() {
        assert!(Modulus::new(1.0).is_err());
        assert!(Modulus::new(-0.1).is_err());
        assert!(Modulus::new(f64::NAN).is_err());
        assert!(Modulus::new(0.0).is_ok());
        assert!(Modulus::new(0.999_999).is_ok());
    }

    #[test]
    fn circular_limit() {
        assert_eq!(complete_k(m(0.0)), FRAC_PI_2);
        assert_eq!(complete_e(m(0.0)), FRAC_PI_2);
        for &u in &[-7.3, -1.0, 0.0, 0.4, 2.0, 31.0] {
            let j = jacobi(u, m(0.0));
            assert!((j.am - u).abs() < 1e-14);
            assert!((j.sn - u.sin()).abs() < 1e-14);
            assert!((j.cn - u.cos()).abs() < 1e-14);
            assert_eq!(j.dn, 1.0);
            assert!((epsilon(u, m(0.0)) - u).abs() < 1e-13);
        }
    }

    #[test]
    fn quarter_period_identity() {
        let k = m(0.5);
        let j = jacobi(complete_k(k), k);
        assert!((j.sn - 1.0).abs() < 1e-12);
        assert!(j.cn.abs() < 1e-12);
        assert!((j.am - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn epsilon_vanishes_at_origin() {
        for &k in &[0.0, 0.3, 0.9, 0.99] {
            assert_eq!(epsilon(0.0, m(k)), 0.0);
        }
    }

    #[test]
    fn amplitude_is_continuous_across_half_periods() {
        let ker = EllipticKernel::new(m(0.8));
        let two_k = 2.0 * ker.complete_k();
        for j in -3..=3 {
            let u = j as f64 * two_k + 0.5 * two_k;
            let below = ker.jacobi(u - 1e-9).am;
            let above = ker.jacobi(u + 1e-9).am;
            assert!((above - below).abs() < 1e-8, "jump at {u}");
        }
    }

    #[test]
    fn known_values() {
        // K(1/√2) = Γ(1/4)² / (4√π)
        let k = m(std::f64::consts::FRAC_1_SQRT_2);
        assert!((complete_k(k) - 1.854_074_677_301_372).abs() < 1e-14);
        assert!((complete_e(k) - 1.350_643_881_047_675_5).abs() < 1e-14);
    }
}
