//! Direct numerical summation of one-index bracket-free series.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{rational, NumericValue, Symbol};
use crate::bracket::BracketSeries;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SeriesSum {
    Converged {
        value: f64,
        terms: usize,
    },
    /// Every sampled term sits on a pole.
    Divergent,
    /// Every sampled term vanishes.
    Null,
    NotConverged {
        partial: f64,
        terms: usize,
    },
}

impl SeriesSum {
    pub fn value(self) -> Option<f64> {
        match self {
            SeriesSum::Converged { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// Sums `Σ_n φ_n c(n) Π v^{e_v(n)}` with `params` binding every parameter and
/// `vars` giving each variable a positive value. Stops once three successive
/// terms fall below `tol` relative to the running sum.
pub fn sum_series_numeric(
    s: &BracketSeries,
    params: &BTreeMap<Symbol, f64>,
    vars: &BTreeMap<String, f64>,
    max_terms: usize,
    tol: f64,
) -> Result<SeriesSum> {
    if !s.brackets().is_empty() {
        return Err(Error::InvalidShape("series still carries brackets".into()));
    }
    let [n] = s.indices() else {
        return Err(Error::InvalidShape(format!("expected one index, found {}", s.indices().len())));
    };
    let mut values: BTreeMap<Symbol, Complex64> =
        params.iter().map(|(k, v)| (k.clone(), Complex64::new(*v, 0.0))).collect();
    let mut sum = 0.0;
    let mut small_run = 0;
    let mut poles = 0;
    let mut zeros = 0;
    let mut ln_fact = 0.0;
    for k in 0..max_terms {
        if k > 0 {
            ln_fact += (k as f64).ln();
        }
        let mut exact = BTreeMap::new();
        exact.insert(n.clone(), rational::int(k as i64));
        let coefficient = s.coefficient().eval_exact(&exact).simplify();
        values.insert(n.clone(), Complex64::new(k as f64, 0.0));
        let c = match coefficient.eval_numeric(&values)? {
            NumericValue::Divergent => {
                poles += 1;
                continue;
            }
            NumericValue::Finite(c) if c.norm() == 0.0 => {
                zeros += 1;
                continue;
            }
            NumericValue::Finite(c) => c.re,
        };
        let mut log_mag = -ln_fact;
        let mut sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        for (var, e) in s.exponents() {
            let base = *vars.get(var).ok_or_else(|| Error::UnboundSymbol(var.clone()))?;
            if base <= 0.0 {
                return Err(Error::InvalidArgument(format!("{var} must be positive")));
            }
            log_mag += e.eval(&values)?.re * base.ln();
        }
        if c < 0.0 {
            sign = -sign;
        }
        let term = sign * (log_mag + c.abs().ln()).exp();
        sum += term;
        if term.abs() <= tol * sum.abs() {
            small_run += 1;
            if small_run >= 3 {
                return Ok(SeriesSum::Converged { value: sum, terms: k + 1 });
            }
        } else {
            small_run = 0;
        }
    }
    if poles == max_terms {
        return Ok(SeriesSum::Divergent);
    }
    if zeros == max_terms {
        return Ok(SeriesSum::Null);
    }
    Ok(SeriesSum::NotConverged { partial: sum, terms: max_terms })
}
