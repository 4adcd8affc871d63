//! Exact substrate: rationals, symbols, affine forms, gamma-product
//! expressions, and their JSON encoding.

pub mod affine;
pub mod gamma_expr;
pub mod json;
pub mod rational;
pub mod symbol;

pub use affine::{AffineForm, Bindings};
pub use gamma_expr::{GammaExpr, GammaFactor, LinearFactor, NumericValue, PowerFactor};
pub use rational::Rational;
pub use symbol::{Symbol, SymbolKind};

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::Result;

/// Canonical form of `e`.
pub fn gamma_simplify(e: &GammaExpr) -> GammaExpr {
    e.simplify()
}

/// Floating-point value of `e`; every symbol must be bound.
pub fn gamma_eval_numeric(e: &GammaExpr, values: &BTreeMap<Symbol, Complex64>) -> Result<NumericValue> {
    e.eval_numeric(values)
}

/// `f` with the bound symbols replaced.
pub fn affine_substitute(f: &AffineForm, bindings: &Bindings) -> Result<AffineForm> {
    f.substitute(bindings)
}
