//! Independent numerical routes to quantities the symbolic engine predicts.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::ln_gamma;
use super::quadrature::{integrate, integrate_to_infinity, wynn_epsilon, QuadratureResult, Tolerance};
use super::special::{eval_ei_neg, eval_k0};
use crate::error::{Error, Result};

/// `∫₀^∞∫₀^∞ x^{α-1} y^{β-1} Ei(-x²y) K₀(x/y) dx dy` by iterated adaptive
/// quadrature. Finite only for `α + β > 0` and `α - 2β > 0`.
pub fn quad_2d_main_integral(alpha: f64, beta: f64, tol: f64) -> Result<QuadratureResult> {
    if !(alpha + beta > 0.0 && alpha - 2.0 * beta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "integral diverges at alpha = {alpha}, beta = {beta}: needs alpha + beta > 0 and alpha - 2 beta > 0"
        )));
    }
    let inner_tol = Tolerance::new(0.0, tol * 1e-2).with_budget(20_000);
    let mut inner_evals = 0usize;
    let mut inner_ok = true;
    let outer = integrate_to_infinity(
        |y| {
            // Bulk of the x-integrand sits below min(y, y^{-1/2}).
            let scale = y.min(1.0 / y.sqrt());
            let r = integrate_to_infinity(
                |x| {
                    let (Ok(e), Ok(k)) = (eval_ei_neg(x * x * y), eval_k0(x / y)) else {
                        return 0.0;
                    };
                    if e == 0.0 || k == 0.0 {
                        return 0.0;
                    }
                    x.powf(alpha - 1.0) * e * k
                },
                0.0,
                scale,
                inner_tol,
            );
            inner_evals += r.evals;
            inner_ok &= r.converged;
            y.powf(beta - 1.0) * r.value
        },
        0.0,
        1.0,
        Tolerance::new(0.0, tol).with_budget(5_000),
    );
    Ok(QuadratureResult {
        value: outer.value,
        error: outer.error,
        evals: outer.evals + inner_evals,
        converged: outer.converged && inner_ok,
    })
}

/// `K₀(x) = ∫₀^∞ cos(xt)/√(1+t²) dt`, summed between zeros of the cosine
/// and accelerated with Wynn's epsilon.
pub fn k0_cosine_integral(x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidArgument(format!("argument must be positive, got {x}")));
    }
    let f = |t: f64| (x * t).cos() / (1.0 + t * t).sqrt();
    let tol = Tolerance::new(1e-16, 1e-12);
    let mut edge = 0.5 * PI / x;
    let mut sum = integrate(f, 0.0, edge, tol).value;
    let mut sums = vec![sum];
    for k in 1..40 {
        let next = (k as f64 + 0.5) * PI / x;
        sum += integrate(f, edge, next, tol).value;
        sums.push(sum);
        edge = next;
    }
    Ok(wynn_epsilon(&sums))
}

/// `K₀(ξ)` from its inverse Mellin integral
/// `(1/2πi)∫ ξ^{-z} 2^{z-2} Γ(z/2)² dz` along `Re z = c`, `c > 0`.
pub fn k0_contour_integral(xi: f64, c: f64) -> Result<f64> {
    if !(xi > 0.0 && c > 0.0) {
        return Err(Error::InvalidArgument(format!("need xi > 0 and c > 0, got {xi}, {c}")));
    }
    let ln_xi = xi.ln();
    let ln2 = 2f64.ln();
    // The integrand is conjugate-symmetric in y, so only Re matters.
    let g = |y: f64| {
        let z = Complex64::new(c, y);
        let log = -z * ln_xi + (z - 2.0) * ln2 + 2.0 * ln_gamma(z / 2.0);
        log.exp().re
    };
    let r = integrate_to_infinity(g, 0.0, 4.0, Tolerance::new(1e-14, 1e-12));
    Ok(r.value / PI)
}

/// `∫₀^∞ ξ^{s-1} f(ξ) dξ` for `f` one of the kernel functions.
pub fn mellin_moment(f: impl Fn(f64) -> Result<f64>, s: f64, tol: f64) -> QuadratureResult {
    integrate_to_infinity(
        |x| match f(x) {
            Ok(v) if v != 0.0 => x.powf(s - 1.0) * v,
            _ => 0.0,
        },
        0.0,
        1.0,
        Tolerance::new(0.0, tol),
    )
}
