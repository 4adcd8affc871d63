//! Complex Γ via the Lanczos approximation (g = 7, nine terms) with the
//! reflection formula for `Re z < 1/2`.

use std::f64::consts::PI;

use num_complex::Complex64;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// `ln Γ(z)` up to an additive multiple of `2πi`, which is irrelevant once
/// exponentiated. Not defined at the poles `z = 0, -1, -2, ...`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z) Γ(1 - z) = π / sin(πz)
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    ln_gamma_lanczos(z)
}

fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut series = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        series += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Complex64::new(0.5 * (2.0 * PI).ln(), 0.0) + (z + 0.5) * t.ln() - t + series.ln()
}

pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

pub fn gamma_real(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    let g = gamma(Complex64::new(x, 0.0));
    g.re
}

/// True when `z` lies within relative `1e-12` of a nonpositive integer.
pub fn is_pole(z: Complex64) -> bool {
    let nearest = z.re.round();
    let scale = z.norm().max(1.0);
    nearest <= 0.0 && (z.re - nearest).abs() <= 1e-12 * scale && z.im.abs() <= 1e-12 * scale
}
