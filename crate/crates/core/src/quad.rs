//! Adaptive quadrature on top of the double-exponential rule.
//!
//! The underlying rule caps its evaluation count, so intervals whose error
//! estimate misses the target are bisected until they meet it.

const MAX_DEPTH: u32 = 12;
const REL_FLOOR: f64 = 1e-13;

/// Integrates `f` over `[a, b]` to roughly `abs_tol` absolute error.
pub fn integrate<F>(f: F, a: f64, b: f64, abs_tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return 0.0;
    }
    recurse(&f, a, b, abs_tol, 0)
}

/// Like [`integrate`], but pre-splits `[a, b]` at the supplied interior
/// breakpoints (e.g. period boundaries of an oscillating integrand).
pub fn integrate_pieces<F>(f: F, a: f64, b: f64, breaks: &[f64], abs_tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let mut knots = vec![a];
    knots.extend(breaks.iter().copied().filter(|&t| t > a && t < b));
    knots.push(b);
    let per = abs_tol / (knots.len() - 1) as f64;
    knots
        .windows(2)
        .map(|w| recurse(&f, w[0], w[1], per, 0))
        .sum()
}

fn recurse<F>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64
where
    F: Fn(f64) -> f64,
{
    let mut out = quadrature::double_exponential::integrate(f, a, b, tol);
    // The rule cannot resolve much below this relative level; asking for
    // more only makes it stop at its evaluation cap with a worse result.
    let floor = REL_FLOOR * out.integral.abs();
    if tol < floor {
        out = quadrature::double_exponential::integrate(f, a, b, floor);
    }
    if out.error_estimate <= tol.max(floor) || depth >= MAX_DEPTH {
        return out.integral;
    }
    let mid = 0.5 * (a + b);
    recurse(f, a, mid, 0.5 * tol, depth + 1) + recurse(f, mid, b, 0.5 * tol, depth + 1)
}
