//! K₀ and Ei on the positive axis.
//!
//! K₀ uses the ascending series up to `x = 2` and above that the trapezoid
//! rule on `e^x K₀(x) = ∫₀^∞ exp(-x(cosh t - 1)) dt`, which converges
//! geometrically in the step size because the integrand is analytic in a
//! strip of half-width π/2. The usual large-x asymptotic series cannot reach
//! 1e-10 near the switchover, so it is not used.
//!
//! `Ei(-x) = -E₁(x)`: ascending series up to `x = 1`, continued fraction
//! (modified Lentz) beyond.

use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn check(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("argument must be positive and finite, got {x}")))
    }
}

/// Modified Bessel function `K₀(x)` for `x > 0`.
pub fn eval_k0(x: f64) -> Result<f64> {
    check(x)?;
    Ok(if x <= 2.0 { k0_series(x) } else { k0_trapezoid(x) })
}

fn k0_series(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut i0 = 1.0;
    let mut tail = 0.0;
    let mut harmonic = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= q / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        tail += term * harmonic;
        if term < 1e-18 * i0 {
            break;
        }
    }
    -((x / 2.0).ln() + EULER_GAMMA) * i0 + tail
}

fn k0_trapezoid(x: f64) -> f64 {
    if x > 700.0 {
        return 0.0;
    }
    let h = 0.125;
    let mut sum = 0.5;
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        let v = (-x * (t.cosh() - 1.0)).exp();
        sum += v;
        if v < 1e-18 * sum {
            break;
        }
        k += 1;
    }
    (-x).exp() * h * sum
}

/// `Ei(-x)` for `x > 0`; always negative.
pub fn eval_ei_neg(x: f64) -> Result<f64> {
    check(x)?;
    Ok(-e1(x))
}

fn e1(x: f64) -> f64 {
    if x <= 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..100 {
            let kf = k as f64;
            term *= -x / kf;
            let add = term / kf;
            sum += add;
            if add.abs() < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
        }
        -EULER_GAMMA - x.ln() - sum
    } else {
        if x > 740.0 {
            return 0.0;
        }
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..1000 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-x).exp()
    }
}
