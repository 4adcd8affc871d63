//! Floating-point side: gamma, special functions, quadrature, and the
//! numerical cross-checks of symbolic results.

pub mod checks;
pub mod gamma;
pub mod quadrature;
pub mod series;
pub mod special;

pub use checks::{k0_contour_integral, k0_cosine_integral, mellin_moment, quad_2d_main_integral};
pub use quadrature::{integrate, integrate_to_infinity, QuadratureResult, Tolerance};
pub use series::{sum_series_numeric, SeriesSum};
pub use special::{eval_ei_neg, eval_k0};
