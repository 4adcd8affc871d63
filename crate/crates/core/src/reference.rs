//! The closed form every pipeline is expected to reach:
//!
//! `∫₀^∞∫₀^∞ x^{α-1} y^{β-1} Ei(-x²y) K₀(x/y) dx dy
//!     = -(1/12) Γ²(s) Γ²(w) 4^{w} / Γ(s + 1)`
//!
//! with `s = (α+β)/3` and `w = (α-2β)/6`.

use crate::algebra::rational::{int, rat};
use crate::algebra::symbol::{alpha, beta};
use crate::algebra::{AffineForm, GammaExpr};

/// `(α + β)/3`.
pub fn s_form() -> AffineForm {
    (AffineForm::symbol(alpha()) + AffineForm::symbol(beta())).scale(&rat(1, 3))
}

/// `(α - 2β)/6`.
pub fn w_form() -> AffineForm {
    (AffineForm::symbol(alpha()) - AffineForm::symbol(beta()).scale(&int(2))).scale(&rat(1, 6))
}

/// The right side exactly as usually printed, not canonicalized.
pub fn printed_rhs() -> GammaExpr {
    GammaExpr::rational(rat(-1, 12))
        * GammaExpr::gamma_pow(s_form(), 2)
        * GammaExpr::gamma_pow(w_form(), 2)
        * GammaExpr::power(int(4), -w_form()).recip()
        * GammaExpr::gamma(s_form().add_constant(&int(1))).recip()
}

/// Real-valued right side at concrete parameters; used by numeric checks.
pub fn value(alpha: f64, beta: f64) -> f64 {
    use crate::numerics::gamma::ln_gamma;
    use num_complex::Complex64;
    let s = (alpha + beta) / 3.0;
    let w = (alpha - 2.0 * beta) / 6.0;
    let lg = |x: f64| ln_gamma(Complex64::new(x, 0.0));
    let l = lg(s) * 2.0 + lg(w) * 2.0 + Complex64::new(w * 4f64.ln(), 0.0) - lg(s + 1.0);
    -(l.exp().re) / 12.0
}

/// True inside the region where the double integral converges:
/// `α + β > 0` and `α - 2β > 0`.
pub fn in_validated_region(alpha: f64, beta: f64) -> bool {
    alpha + beta > 0.0 && alpha - 2.0 * beta > 0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn known_values() {
        assert!((value(5.0, 1.0) + PI / 12.0).abs() < 1e-14);
        assert!((value(7.0, 2.0) + PI / 9.0).abs() < 1e-14);
    }
}
