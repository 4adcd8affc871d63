#![allow(dead_code)]

use std::collections::BTreeMap;

use brackets_core::algebra::rational::{int, rat};
use brackets_core::algebra::symbol::{alpha, beta};
use brackets_core::algebra::{AffineForm, GammaExpr, Rational, Symbol};
use brackets_core::bracket::{Bracket, BracketSeries};
use brackets_core::eval::{cofactor_determinant, partial_eliminate, ClosedForm};
use brackets_core::Result;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn idx(name: &str) -> Symbol {
    Symbol::index(name)
}

pub fn form(terms: &[(&Symbol, i64)], constant: Rational) -> AffineForm {
    AffineForm::from_parts(terms.iter().map(|(s, c)| ((*s).clone(), int(*c))), constant)
}

/// Eliminates every index in `order`, each against the first remaining
/// bracket that mentions it, and returns the surviving coefficient.
pub fn eliminate_in_order(s: &BracketSeries, order: &[Symbol]) -> Result<ClosedForm> {
    let mut cur = s.clone();
    for target in order {
        let using = cur
            .brackets()
            .iter()
            .find(|b| b.arg().contains(target))
            .cloned()
            .expect("a non-singular system mentions every index");
        cur = partial_eliminate(&cur, target, &using)?;
    }
    assert!(cur.indices().is_empty() && cur.brackets().is_empty());
    Ok(ClosedForm::new(cur.coefficient().clone()))
}

pub fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

pub fn random_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<Rational>> {
    (0..rows).map(|_| (0..cols).map(|_| int(r.gen_range(-3..=3))).collect()).collect()
}

pub fn random_rational(r: &mut ChaCha8Rng) -> Rational {
    rat(r.gen_range(-6..=6), r.gen_range(1..=4))
}

/// A random parameter-and-constant right-hand part `c₁α + c₂β + c₀`.
pub fn random_parameter_form(r: &mut ChaCha8Rng) -> AffineForm {
    AffineForm::from_parts([(alpha(), random_rational(r)), (beta(), random_rational(r))], random_rational(r))
}

/// An `n`-index, `n`-bracket series with a random non-singular integer
/// matrix and a coefficient mixing gamma factors and powers of the indices.
pub fn random_square_series(r: &mut ChaCha8Rng, n: usize) -> BracketSeries {
    let names: Vec<Symbol> = (0..n).map(|i| idx(&format!("n{i}"))).collect();
    let matrix = loop {
        let m = random_matrix(r, n, n);
        if cofactor_determinant(&m) != int(0) {
            break m;
        }
    };
    let brackets = matrix
        .iter()
        .map(|row| {
            let lin = AffineForm::from_parts(names.iter().cloned().zip(row.iter().cloned()), int(0));
            Bracket::new(lin + random_parameter_form(r)).expect("row is nonzero")
        })
        .collect();
    let mut coefficient = GammaExpr::one();
    for name in &names {
        let shift = AffineForm::symbol(alpha()).scale(&random_rational(r)).add_constant(&random_rational(r));
        let arg = AffineForm::term(name.clone(), int(r.gen_range(1..=2))) + shift;
        coefficient = coefficient * GammaExpr::gamma_pow(arg, if r.gen_bool(0.5) { 1 } else { -1 });
        coefficient = coefficient * GammaExpr::power(int(r.gen_range(2..=5)), AffineForm::symbol(name.clone()));
    }
    BracketSeries::new(names, coefficient, BTreeMap::new(), brackets).expect("valid series")
}

/// Numeric value at `(α, β)`; `None` on a pole.
pub fn value_at(cf: &ClosedForm, a: f64, b: f64) -> Option<f64> {
    brackets_core::pipeline::evaluate(cf, a, b).ok()?.finite().map(|v| v.re)
}

pub fn rel_diff(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs())
}

/// A point with `α + β > 0` and `α - 2β > 0`.
pub fn validated_point(r: &mut ChaCha8Rng) -> (f64, f64) {
    let a: f64 = r.gen_range(0.5..10.0);
    let lo = -a + 0.2;
    let hi = a / 2.0 - 0.2;
    (a, r.gen_range(lo..hi))
}
