//! Bracket integrals over vertical contours.
//!
//! A [`BracketIntegral`] is `(1/2πi)^N ∫...∫ body ds_1...ds_N`, where the body
//! is an ordinary [`BracketSeries`] whose coefficient, exponents, and
//! brackets may mention the contour variables. Keeping the normalization in
//! the type turns rule E4's `2πi/|β|` into a plain `1/|β|`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::algebra::{AffineForm, Bindings, GammaExpr, GammaFactor, Rational, Symbol, SymbolKind};
use crate::bracket::{rule_p1_integrate, series_product, Bracket, BracketSeries};
use crate::derivation::{Derivation, Rule};
use crate::error::{Error, Result};
use crate::eval::{ClosedForm, IndexSolution, LinearSystem};
use crate::representations::{MellinEntry, XI};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BracketIntegral {
    contour_vars: Vec<Symbol>,
    body: BracketSeries,
}

impl BracketIntegral {
    pub fn new(contour_vars: Vec<Symbol>, body: BracketSeries) -> Result<Self> {
        if contour_vars.is_empty() {
            return Err(Error::InvalidShape("a bracket integral needs at least one contour variable".into()));
        }
        let mut seen = BTreeSet::new();
        for v in &contour_vars {
            if v.kind() != SymbolKind::ContourVar {
                return Err(Error::InvalidArgument(format!("`{v}` is not a contour variable")));
            }
            if !seen.insert(v) {
                return Err(Error::IndexCollision(v.to_string()));
            }
        }
        Ok(Self { contour_vars, body })
    }

    pub fn contour_vars(&self) -> &[Symbol] {
        &self.contour_vars
    }

    pub fn body(&self) -> &BracketSeries {
        &self.body
    }

    pub fn integrand(&self) -> &GammaExpr {
        self.body.coefficient()
    }

    pub fn brackets(&self) -> &[Bracket] {
        self.body.brackets()
    }

    pub fn residual_indices(&self) -> &[Symbol] {
        self.body.indices()
    }

    /// Exponent `N` of the `(1/2πi)^N` normalization.
    pub fn normalization_power(&self) -> usize {
        self.contour_vars.len()
    }

    fn with_body(&self, body: BracketSeries) -> Self {
        Self { contour_vars: self.contour_vars.clone(), body }
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        let mut vars = self.contour_vars.clone();
        vars.extend(other.contour_vars.iter().cloned());
        Self::new(vars, series_product(&self.body, &other.body)?)
    }

    /// Multiplies the body by an ordinary series.
    pub fn times_series(&self, s: &BracketSeries) -> Result<Self> {
        Ok(self.with_body(series_product(&self.body, s)?))
    }

    pub fn integrate(&self, variable: &str) -> Result<Self> {
        Ok(self.with_body(rule_p1_integrate(&self.body, variable)?))
    }

    pub fn distribute(&self, hook: &str, scales: &BTreeMap<String, Rational>) -> Result<Self> {
        Ok(self.with_body(self.body.distribute_exponent(hook, scales)?))
    }
}

impl fmt::Display for BracketIntegral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<&str> = self.contour_vars.iter().map(|s| s.name()).collect();
        write!(f, "(1/2πi)^{} ∫ d{} {}", vars.len(), vars.join(" d"), self.body)
    }
}

/// `f(ξ) = (1/2πi) ∫ ξ^{-s} M(s) ds` with the contour variable `var`.
pub fn mb_from_mellin(entry: &MellinEntry, var: &Symbol) -> Result<BracketIntegral> {
    let integrand = entry.in_variable(var)?.simplify();
    let body =
        BracketSeries::new(vec![], integrand, [(XI.to_string(), -AffineForm::symbol(var.clone()))].into(), vec![])?;
    BracketIntegral::new(vec![var.clone()], body)
}

/// Substitutes `old = c·new + d`; the Jacobian contributes `|c|` because the
/// image of a vertical line keeps its upward orientation after `|c|` is
/// taken out.
pub fn change_variable(
    bi: &BracketIntegral,
    old: &Symbol,
    new: &Symbol,
    c: &Rational,
    d: &Rational,
) -> Result<BracketIntegral> {
    if c.is_zero() {
        return Err(Error::InvalidArgument("change of variable with zero scale".into()));
    }
    let pos = bi
        .contour_vars
        .iter()
        .position(|v| v == old)
        .ok_or_else(|| Error::InvalidArgument(format!("{old} is not a contour variable")))?;
    let mut b = Bindings::new();
    b.insert(old.clone(), AffineForm::term(new.clone(), c.clone()).add_constant(d));
    let body = bi.body.substitute(&b)?.scaled(&c.abs());
    let mut vars = bi.contour_vars.clone();
    vars[pos] = new.clone();
    BracketIntegral::new(vars, body)
}

#[derive(Debug, Clone)]
pub enum E4Outcome {
    Integral(BracketIntegral),
    Series(BracketSeries),
    Value(ClosedForm),
}

impl E4Outcome {
    pub fn into_integral(self) -> Result<BracketIntegral> {
        match self {
            E4Outcome::Integral(bi) => Ok(bi),
            other => Err(Error::InvalidShape(format!("expected a contour integral, got {}", other.describe()))),
        }
    }

    pub fn into_series(self) -> Result<BracketSeries> {
        match self {
            E4Outcome::Series(s) => Ok(s),
            other => Err(Error::InvalidShape(format!("expected a bracket series, got {}", other.describe()))),
        }
    }

    pub fn into_value(self) -> Result<ClosedForm> {
        match self {
            E4Outcome::Value(v) => Ok(v),
            other => Err(Error::InvalidShape(format!("expected a value, got {}", other.describe()))),
        }
    }

    fn describe(&self) -> String {
        match self {
            E4Outcome::Integral(bi) => bi.to_string(),
            E4Outcome::Series(s) => s.to_string(),
            E4Outcome::Value(v) => v.to_string(),
        }
    }
}

/// `(1/2πi) ∫ F(s) <a + βs> ds = F(-a/β) / |β|`.
pub fn rule_e4(bi: &BracketIntegral, var: &Symbol, using: &Bracket) -> Result<E4Outcome> {
    let pos = bi
        .contour_vars
        .iter()
        .position(|v| v == var)
        .ok_or_else(|| Error::InvalidArgument(format!("{var} is not a contour variable")))?;
    let bpos = bi
        .brackets()
        .iter()
        .position(|b| b == using)
        .ok_or_else(|| Error::InvalidArgument(format!("{using} is not a bracket of the integral")))?;
    let beta = using.arg().coeff(var);
    let value = using.arg().solve_for(var)?;
    let mut b = Bindings::new();
    b.insert(var.clone(), value);
    let mut body = bi.body.clone();
    body.remove_bracket(bpos);
    let body = body.substitute(&b)?.scaled(&beta.abs().recip());
    let mut vars = bi.contour_vars.clone();
    vars.remove(pos);
    if !vars.is_empty() {
        return Ok(E4Outcome::Integral(BracketIntegral::new(vars, body)?));
    }
    if body.indices().is_empty() && body.brackets().is_empty() && body.exponents().is_empty() {
        return Ok(E4Outcome::Value(ClosedForm::new(body.coefficient().clone())));
    }
    Ok(E4Outcome::Series(body))
}

#[derive(Debug, Clone)]
pub struct ContourEvaluation {
    pub system: LinearSystem,
    pub solution: IndexSolution,
    pub value: ClosedForm,
}

/// All contour variables at once: `F(s*) / |det A|`.
pub fn evaluate_contour(bi: &BracketIntegral) -> Result<ContourEvaluation> {
    if !bi.residual_indices().is_empty() {
        return Err(Error::InvalidShape("rule E5 needs an integral without residual sums".into()));
    }
    if let Some(v) = bi.body.exponents().keys().next() {
        return Err(Error::InvalidShape(format!("variable `{v}` still has an exponent")));
    }
    if bi.brackets().len() != bi.contour_vars.len() {
        return Err(Error::InvalidShape(format!(
            "{} contour variables and {} brackets",
            bi.contour_vars.len(),
            bi.brackets().len()
        )));
    }
    let system = LinearSystem::from_brackets(bi.brackets(), &bi.contour_vars);
    let solution = system.solve()?;
    let value = bi.integrand().substitute(&solution.bindings)?.scale(&solution.determinant.abs().recip());
    Ok(ContourEvaluation { system, solution, value: ClosedForm::new(value) })
}

pub fn rule_e5(bi: &BracketIntegral) -> Result<ClosedForm> {
    Ok(evaluate_contour(bi)?.value)
}

/// Replaces one power of `Γ(arg)` by the indexed bracket `<arg + fresh>`,
/// using `Γ(ξ) = Σ φ_n <ξ + n>`.
pub fn gamma_bracketize(e: &GammaExpr, arg: &AffineForm, fresh: &Symbol) -> Result<(GammaExpr, Bracket)> {
    let pos = e
        .gammas
        .iter()
        .position(|g| &g.arg == arg && g.power > 0)
        .ok_or_else(|| Error::InvalidArgument(format!("no positive power of Γ({arg}) in {e}")))?;
    let mut out = e.clone();
    let g: &mut GammaFactor = &mut out.gammas[pos];
    g.power -= 1;
    if g.power == 0 {
        out.gammas.remove(pos);
    }
    let bracket = Bracket::new(arg + &AffineForm::symbol(fresh.clone()))?;
    Ok((out, bracket))
}

/// [`gamma_bracketize`] on the integrand of `bi`; the new index joins the
/// residual sums.
pub fn bracketize_integral(bi: &BracketIntegral, arg: &AffineForm, fresh: &Symbol) -> Result<BracketIntegral> {
    let (integrand, bracket) = gamma_bracketize(bi.integrand(), arg, fresh)?;
    let mut indices = bi.residual_indices().to_vec();
    indices.push(fresh.clone());
    let mut brackets = bi.brackets().to_vec();
    brackets.push(bracket);
    let body = BracketSeries::new(indices, integrand, bi.body.exponents().clone(), brackets)?;
    BracketIntegral::new(bi.contour_vars.clone(), body)
}

impl Derivation {
    pub fn mellin_barnes(&mut self, entry: &MellinEntry, hint: &str) -> Result<BracketIntegral> {
        let var = self.fresh.contour(hint);
        let out = mb_from_mellin(entry, &var)?;
        self.record(
            Rule::MellinBarnes,
            format!("{}", entry.function),
            vec![entry.transform.to_string()],
            out.to_string(),
        );
        Ok(out)
    }

    pub fn change_variable(
        &mut self,
        bi: &BracketIntegral,
        old: &Symbol,
        hint: &str,
        c: &Rational,
    ) -> Result<BracketIntegral> {
        let new = self.fresh.contour(hint);
        let out = change_variable(bi, old, &new, c, &Rational::zero())?;
        self.record(
            Rule::ChangeOfVariable,
            format!("{old} = {}{new}", crate::algebra::rational::format(c)),
            vec![bi.to_string()],
            out.to_string(),
        );
        Ok(out)
    }

    pub fn bracketize(&mut self, bi: &BracketIntegral, arg: &AffineForm, hint: &str) -> Result<BracketIntegral> {
        let n = self.fresh.index(hint);
        let out = bracketize_integral(bi, arg, &n)?;
        self.record(
            Rule::GammaBracketize,
            format!("Γ({arg}) = Σ φ_{n} <{arg} + {n}>"),
            vec![bi.to_string()],
            out.to_string(),
        );
        Ok(out)
    }

    pub fn e4(&mut self, bi: &BracketIntegral, var: &Symbol, using: &Bracket) -> Result<E4Outcome> {
        let out = rule_e4(bi, var, using)?;
        let value = using.arg().solve_for(var)?;
        self.record(Rule::E4, format!("{var}* = {value} from {using}"), vec![bi.to_string()], out.describe());
        Ok(out)
    }

    pub fn e5(&mut self, bi: &BracketIntegral) -> Result<ClosedForm> {
        let ev = match evaluate_contour(bi) {
            Ok(ev) => ev,
            Err(e @ Error::NoAssignment(_)) => {
                let dump = LinearSystem::from_brackets(bi.brackets(), bi.contour_vars()).explain(None);
                self.record_system(Rule::E5, "singular system", vec![bi.to_string()], e.to_string(), dump);
                return Err(e);
            }
            Err(e) => return Err(e),
        };
        let dump = ev.system.explain(Some(&ev.solution));
        let stars: Vec<String> = dump.solution.iter().map(|(v, f)| format!("{v}* = {f}")).collect();
        let note = format!("{}, |det| = {}", stars.join(", "), dump.abs_determinant.clone().unwrap_or_default());
        self.record_system(Rule::E5, note, vec![bi.to_string()], ev.value.to_string(), dump);
        Ok(ev.value)
    }

    pub fn integrate_contour(&mut self, bi: &BracketIntegral, variable: &str) -> Result<BracketIntegral> {
        let out = bi.integrate(variable)?;
        self.record(Rule::P1, format!("integrate over {variable}"), vec![bi.to_string()], out.to_string());
        Ok(out)
    }

    pub fn distribute_contour(
        &mut self,
        bi: &BracketIntegral,
        hook: &str,
        scales: &BTreeMap<String, Rational>,
    ) -> Result<BracketIntegral> {
        let out = bi.distribute(hook, scales)?;
        let shown: Vec<String> =
            scales.iter().map(|(v, k)| format!("{v}^{}", crate::algebra::rational::format(k))).collect();
        self.record(Rule::Instantiate, format!("{hook} = {}", shown.join(" ")), vec![bi.to_string()], out.to_string());
        Ok(out)
    }

    pub fn product_contour(&mut self, a: &BracketIntegral, b: &BracketIntegral) -> Result<BracketIntegral> {
        let out = a.product(b)?;
        self.record(Rule::Product, "", vec![a.to_string(), b.to_string()], out.to_string());
        Ok(out)
    }

    pub fn times_series(&mut self, a: &BracketIntegral, s: &BracketSeries) -> Result<BracketIntegral> {
        let out = a.times_series(s)?;
        self.record(Rule::Product, "", vec![a.to_string(), s.to_string()], out.to_string());
        Ok(out)
    }
}
