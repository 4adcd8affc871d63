//! A derivation context: the fresh-name supply for one run plus the ordered
//! record of every rule applied.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{AffineForm, Rational, Symbol};
use crate::bracket::{
    lemma_rescale, rule_p1_integrate, rule_p2_multinomial, series_product, Bracket, BracketSeries, FreshSupply,
    MultinomialTerm,
};
use crate::error::{Error, Result};
use crate::eval::{
    evaluate_square, partial_eliminate, rule_e1, rule_e3_enumerate, Candidate, ClosedForm, LinearSystem, SystemDump,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    P1,
    P2,
    E1,
    E2,
    E3,
    E4,
    E5,
    Lemma,
    #[serde(rename = "partial-eliminate")]
    PartialEliminate,
    #[serde(rename = "product")]
    Product,
    #[serde(rename = "instantiate")]
    Instantiate,
    #[serde(rename = "expand")]
    Expand,
    #[serde(rename = "mellin-series")]
    MellinSeries,
    #[serde(rename = "mellin-barnes")]
    MellinBarnes,
    #[serde(rename = "change-of-variable")]
    ChangeOfVariable,
    #[serde(rename = "gamma-bracketize")]
    GammaBracketize,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::P1 => "P1",
            Rule::P2 => "P2",
            Rule::E1 => "E1",
            Rule::E2 => "E2",
            Rule::E3 => "E3",
            Rule::E4 => "E4",
            Rule::E5 => "E5",
            Rule::Lemma => "Lemma",
            Rule::PartialEliminate => "partial-eliminate",
            Rule::Product => "product",
            Rule::Instantiate => "instantiate",
            Rule::Expand => "expand",
            Rule::MellinSeries => "mellin-series",
            Rule::MellinBarnes => "mellin-barnes",
            Rule::ChangeOfVariable => "change-of-variable",
            Rule::GammaBracketize => "gamma-bracketize",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub rule: Rule,
    pub note: String,
    pub input: Vec<String>,
    pub output: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemDump>,
}

#[derive(Debug, Clone, Default)]
pub struct Derivation {
    pub fresh: FreshSupply,
    trace: Vec<TraceRecord>,
}

impl Derivation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn trace(&self) -> &[TraceRecord] {
        &self.trace
    }

    pub fn into_trace(self) -> Vec<TraceRecord> {
        self.trace
    }

    pub fn record(&mut self, rule: Rule, note: impl Into<String>, input: Vec<String>, output: String) {
        self.trace.push(TraceRecord { rule, note: note.into(), input, output, system: None });
    }

    pub fn record_system(
        &mut self,
        rule: Rule,
        note: impl Into<String>,
        input: Vec<String>,
        output: String,
        system: SystemDump,
    ) {
        self.trace.push(TraceRecord { rule, note: note.into(), input, output, system: Some(system) });
    }

    pub fn indices(&mut self, hints: &[&str]) -> Vec<Symbol> {
        hints.iter().map(|h| self.fresh.index(h)).collect()
    }

    pub fn p1(&mut self, s: &BracketSeries, variable: &str) -> Result<BracketSeries> {
        let out = rule_p1_integrate(s, variable)?;
        self.record(Rule::P1, format!("integrate over {variable}"), vec![s.to_string()], out.to_string());
        Ok(out)
    }

    pub fn p2(&mut self, terms: &[MultinomialTerm], power: &AffineForm, hints: &[&str]) -> Result<BracketSeries> {
        let fresh = self.indices(hints);
        let out = rule_p2_multinomial(terms, power, &fresh)?;
        let shown: Vec<String> = terms.iter().map(describe_term).collect();
        self.record(Rule::P2, format!("({})^({power})", shown.join(" + ")), vec![], out.to_string());
        Ok(out)
    }

    /// Rescales bracket `position` so `target` has coefficient 1.
    pub fn lemma(&mut self, s: &BracketSeries, position: usize, target: &Symbol) -> Result<BracketSeries> {
        let b = &s.brackets()[position];
        let (nb, k) = lemma_rescale(b, target)?;
        let out = crate::bracket::rescale_in_series(s, position, target)?;
        self.record(
            Rule::Lemma,
            format!("{b} = {} {nb}", crate::algebra::rational::format(&k)),
            vec![s.to_string()],
            out.to_string(),
        );
        Ok(out)
    }

    pub fn product(&mut self, a: &BracketSeries, b: &BracketSeries) -> Result<BracketSeries> {
        let out = series_product(a, b)?;
        self.record(Rule::Product, "", vec![a.to_string(), b.to_string()], out.to_string());
        Ok(out)
    }

    pub fn e1(&mut self, s: &BracketSeries) -> Result<ClosedForm> {
        let out = rule_e1(s)?;
        let n = &s.indices()[0];
        let value = s.brackets()[0].arg().solve_for(n)?;
        self.record(Rule::E1, format!("{n}* = {value}"), vec![s.to_string()], out.to_string());
        Ok(out)
    }

    pub fn e2(&mut self, s: &BracketSeries) -> Result<ClosedForm> {
        let ev = match evaluate_square(s) {
            Ok(ev) => ev,
            Err(e @ Error::NoAssignment(_)) => {
                let dump = LinearSystem::from_brackets(s.brackets(), s.indices()).explain(None);
                self.record_system(Rule::E2, "singular system", vec![s.to_string()], e.to_string(), dump);
                return Err(e);
            }
            Err(e) => return Err(e),
        };
        let dump = ev.system.explain(Some(&ev.solution));
        let note = format!(
            "det = {}, |det| = {}",
            dump.determinant.clone().unwrap_or_default(),
            dump.abs_determinant.clone().unwrap_or_default()
        );
        self.record_system(Rule::E2, note, vec![s.to_string()], ev.value.to_string(), dump);
        Ok(ev.value)
    }

    pub fn e3(&mut self, s: &BracketSeries) -> Result<Vec<Candidate>> {
        let out = rule_e3_enumerate(s)?;
        let shown: Vec<String> = out.iter().map(|c| c.series.to_string()).collect();
        self.record(Rule::E3, format!("{} candidates", out.len()), vec![s.to_string()], shown.join("; "));
        Ok(out)
    }

    pub fn eliminate(&mut self, s: &BracketSeries, target: &Symbol, using: &Bracket) -> Result<BracketSeries> {
        let out = partial_eliminate(s, target, using)?;
        let value = using.arg().solve_for(target)?;
        self.record(
            Rule::PartialEliminate,
            format!("{target}* = {value} from {using}"),
            vec![s.to_string()],
            out.to_string(),
        );
        Ok(out)
    }

    /// Replaces the argument hook by powers of integration variables.
    pub fn distribute(
        &mut self,
        s: &BracketSeries,
        hook: &str,
        scales: &BTreeMap<String, Rational>,
    ) -> Result<BracketSeries> {
        let out = s.distribute_exponent(hook, scales)?;
        let shown: Vec<String> =
            scales.iter().map(|(v, k)| format!("{v}^{}", crate::algebra::rational::format(k))).collect();
        self.record(Rule::Instantiate, format!("{hook} = {}", shown.join(" ")), vec![s.to_string()], out.to_string());
        Ok(out)
    }
}

fn describe_term(t: &MultinomialTerm) -> String {
    let mut parts = Vec::new();
    if t.coefficient.simplify().as_rational() != Some(crate::algebra::rational::int(1)) {
        parts.push(t.coefficient.to_string());
    }
    for (v, k) in &t.exponents {
        parts.push(format!("{v}^{}", crate::algebra::rational::format(k)));
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join(" ")
    }
}
