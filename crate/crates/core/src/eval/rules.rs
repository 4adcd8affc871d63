use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::linear::{IndexSolution, LinearSystem};
use crate::algebra::{Bindings, GammaExpr, Rational, Symbol, SymbolKind};
use crate::bracket::{complexity_index, Bracket, BracketSeries};
use crate::error::{Error, Result};

/// Terminal value of an evaluation: a canonical expression in the free
/// parameters, flagged when it sits on a gamma pole for every parameter value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub expr: GammaExpr,
    pub divergent: bool,
}

impl ClosedForm {
    pub fn new(expr: GammaExpr) -> Self {
        let expr = expr.simplify();
        let divergent = expr.is_divergent();
        Self { expr, divergent }
    }

    /// Canonical equality of the expressions.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.divergent == other.divergent && self.expr.equivalent(&other.expr)
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)?;
        if self.divergent {
            f.write_str("  [divergent]")?;
        }
        Ok(())
    }
}

/// Result of an index-zero evaluation with the system it solved.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub system: LinearSystem,
    pub solution: IndexSolution,
    pub value: ClosedForm,
}

fn require_no_exponents(s: &BracketSeries) -> Result<()> {
    if let Some(v) = s.exponents().keys().next() {
        return Err(Error::InvalidShape(format!("variable `{v}` still has an exponent")));
    }
    Ok(())
}

/// `f(n*) Π Γ(-n_i*) / |det|` for the solved indices.
fn ramanujan_factor(coefficient: &GammaExpr, solution: &IndexSolution, solved: &[Symbol]) -> Result<GammaExpr> {
    let mut out = coefficient.substitute(&solution.bindings)?;
    for s in solved {
        out = out * GammaExpr::gamma(-&solution.bindings[s]);
    }
    Ok(out.scale(&solution.determinant.abs().recip()))
}

/// Index-zero evaluation that also returns the solved system.
pub fn evaluate_square(s: &BracketSeries) -> Result<Evaluation> {
    require_no_exponents(s)?;
    if s.indices().is_empty() || s.indices().len() != s.brackets().len() {
        return Err(Error::InvalidShape(format!(
            "{} indices and {} brackets; index-zero evaluation needs a square system",
            s.indices().len(),
            s.brackets().len()
        )));
    }
    let system = LinearSystem::from_brackets(s.brackets(), s.indices());
    let solution = system.solve()?;
    let value = ClosedForm::new(ramanujan_factor(s.coefficient(), &solution, s.indices())?);
    Ok(Evaluation { system, solution, value })
}

/// Ramanujan's master theorem: `Σ φ_n f(n) <a n + b> = f(n*) Γ(-n*) / |a|`.
pub fn rule_e1(s: &BracketSeries) -> Result<ClosedForm> {
    if s.indices().len() != 1 || s.brackets().len() != 1 {
        return Err(Error::InvalidShape(format!(
            "one index and one bracket expected, got {} and {}",
            s.indices().len(),
            s.brackets().len()
        )));
    }
    let n = &s.indices()[0];
    if s.brackets()[0].arg().coeff(n).is_zero() {
        return Err(Error::NoAssignment(format!("index {n} is absent from {}", s.brackets()[0])));
    }
    Ok(evaluate_square(s)?.value)
}

/// Index-zero multidimensional evaluation by an exact linear solve.
pub fn rule_e2(s: &BracketSeries) -> Result<ClosedForm> {
    Ok(evaluate_square(s)?.value)
}

/// One maximal-rank contribution of a positive-index series.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub solved: Vec<Symbol>,
    pub free: Vec<Symbol>,
    pub determinant: Rational,
    pub series: BracketSeries,
}

/// Every `k`-subset of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Solves the brackets for every non-singular choice of as many indices as
/// there are brackets, leaving ordinary series in the remaining indices.
pub fn rule_e3_enumerate(s: &BracketSeries) -> Result<Vec<Candidate>> {
    let index = complexity_index(s);
    if index < 0 {
        return Err(Error::NoAssignment(format!("negative complexity index {index}")));
    }
    let b = s.brackets().len();
    let mut out = Vec::new();
    for subset in subsets(s.indices().len(), b) {
        let solved: Vec<Symbol> = subset.iter().map(|&i| s.indices()[i].clone()).collect();
        let free: Vec<Symbol> = s.indices().iter().filter(|i| !solved.contains(i)).cloned().collect();
        let system = LinearSystem::from_brackets(s.brackets(), &solved);
        let solution = match system.solve() {
            Ok(sol) => sol,
            Err(Error::NoAssignment(_)) => continue,
            Err(e) => return Err(e),
        };
        let coefficient = ramanujan_factor(s.coefficient(), &solution, &solved)?.simplify();
        let mut exponents = std::collections::BTreeMap::new();
        for (v, e) in s.exponents() {
            exponents.insert(v.clone(), e.substitute(&solution.bindings)?);
        }
        let series = BracketSeries::new(free.clone(), coefficient, exponents, vec![])?;
        out.push(Candidate { solved, free, determinant: solution.determinant, series });
    }
    Ok(out)
}

/// Sums out `target` against the bracket `using`:
/// `Σ φ_t f(t) <a t + r> ... = f(t*) Γ(-t*) / |a| ...` with `t* = -r/a`.
pub fn partial_eliminate(s: &BracketSeries, target: &Symbol, using: &Bracket) -> Result<BracketSeries> {
    let position = s
        .brackets()
        .iter()
        .position(|b| b == using)
        .ok_or_else(|| Error::InvalidArgument(format!("{using} is not a bracket of the series")))?;
    if !s.indices().contains(target) {
        return Err(Error::InvalidArgument(format!("{target} is not an index of the series")));
    }
    let a = using.arg().coeff(target);
    let value = using.arg().solve_for(target)?;
    let mut bindings = Bindings::new();
    bindings.insert(target.clone(), value.clone());
    let mut rest = s.clone();
    rest.remove_bracket(position);
    rest.drop_index(target);
    let mut out = rest.substitute(&bindings)?;
    let coefficient = (out.coefficient() * &GammaExpr::gamma(-value)).scale(&a.abs().recip()).simplify();
    out = out.with_coefficient(coefficient);
    Ok(out)
}

/// Bracket position for `target` and its unique occurrence, used when a
/// derivation eliminates indices in a fixed order.
pub fn bracket_for(s: &BracketSeries, target: &Symbol) -> Option<Bracket> {
    s.bracket_with(target).map(|p| s.brackets()[p].clone())
}

/// True when no index or contour symbol remains anywhere in the expression.
pub fn is_parameter_only(e: &GammaExpr) -> bool {
    e.symbols().iter().all(|s| s.kind() == SymbolKind::Parameter)
}
