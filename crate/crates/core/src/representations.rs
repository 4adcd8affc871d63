//! Series and bracket representations of K₀ and Ei, and the generator that
//! turns a Mellin transform into a parametric series.
//!
//! Representations are written in a formal argument `ξ`, stored as the
//! exponent variable [`XI`]. [`instantiate`] trades it for powers of the
//! integration variables, so one representation serves `K₀(x/y)`, `K₀(ξ)`,
//! and so on.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::algebra::rational::{int, rat};
use crate::algebra::{AffineForm, GammaExpr, Rational, Symbol};
use crate::bracket::{BracketSeries, MultinomialTerm};
use crate::derivation::{Derivation, Rule};
use crate::error::{Error, Result};

/// Exponent variable standing for the function argument.
pub const XI: &str = "xi";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Function {
    K0,
    Ei,
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Function::K0 => "K0",
            Function::Ei => "Ei",
        })
    }
}

impl FromStr for Function {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "K0" | "k0" => Ok(Function::K0),
            "Ei" | "ei" => Ok(Function::Ei),
            _ => Err(Error::UnknownRepresentation(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepKind {
    /// Three sums, two brackets; from the cosine integral for K₀.
    BracketSeries3Index,
    /// Two sums, one bracket; from the exponential integral for Ei.
    BracketSeries2Index,
    Divergent,
    Null,
    MellinParametric,
}

impl RepKind {
    pub const ALL: [RepKind; 5] = [
        RepKind::BracketSeries3Index,
        RepKind::BracketSeries2Index,
        RepKind::Divergent,
        RepKind::Null,
        RepKind::MellinParametric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RepKind::BracketSeries3Index => "bracket-series-3",
            RepKind::BracketSeries2Index => "bracket-series-2",
            RepKind::Divergent => "divergent",
            RepKind::Null => "null",
            RepKind::MellinParametric => "mellin-parametric",
        }
    }
}

impl fmt::Display for RepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `M(s) = ∫₀^∞ ξ^{s-1} f(ξ) dξ` as a gamma expression in `variable`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MellinEntry {
    pub function: Function,
    pub variable: Symbol,
    pub transform: GammaExpr,
}

impl MellinEntry {
    /// `-Γ(s)/s`.
    pub fn ei() -> Self {
        let s = Symbol::contour("s");
        let f = AffineForm::symbol(s.clone());
        let transform = GammaExpr::rational(int(-1)) * GammaExpr::gamma(f.clone()) * GammaExpr::linear(f, -1);
        Self { function: Function::Ei, variable: s, transform }
    }

    /// `2^s Γ²(s/2) / 4`.
    pub fn k0() -> Self {
        let s = Symbol::contour("s");
        let f = AffineForm::symbol(s.clone());
        let transform = GammaExpr::rational(rat(1, 4))
            * GammaExpr::power(int(2), f.clone())
            * GammaExpr::gamma_pow(f.scale(&rat(1, 2)), 2);
        Self { function: Function::K0, variable: s, transform }
    }

    pub fn of(function: Function) -> Self {
        match function {
            Function::K0 => Self::k0(),
            Function::Ei => Self::ei(),
        }
    }

    /// `M` evaluated at an affine argument, uncanonicalized.
    pub fn at(&self, value: &AffineForm) -> Result<GammaExpr> {
        let mut b = BTreeMap::new();
        b.insert(self.variable.clone(), value.clone());
        self.transform.substitute(&b)
    }

    /// The same transform in another variable.
    pub fn in_variable(&self, v: &Symbol) -> Result<GammaExpr> {
        if v == &self.variable {
            return Ok(self.transform.clone());
        }
        self.at(&AffineForm::symbol(v.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Representation {
    pub function: Function,
    pub kind: RepKind,
    pub series: BracketSeries,
    /// Generator parameters, e.g. `a`, `b` for the Mellin-derived series.
    pub parameters: Vec<(String, AffineForm)>,
}

/// `Σ φ_n |a| M(-an-b)/Γ(-n) ξ^{an+b}`.
pub fn mellin_to_series(entry: &MellinEntry, a: &Rational, b: &AffineForm, index: &Symbol) -> Result<Representation> {
    if a.is_zero() {
        return Err(Error::InvalidArgument("Mellin series scale a must be nonzero".into()));
    }
    let n = AffineForm::symbol(index.clone());
    let power = n.scale(a) + b.clone();
    let coefficient = (entry.at(&-&power)? * GammaExpr::gamma_pow(-n, -1)).scale(&a.abs()).simplify();
    let series = BracketSeries::new(vec![index.clone()], coefficient, [(XI.to_string(), power)].into(), vec![])?;
    let (pa, pb) = match entry.function {
        Function::Ei => ("a", "b"),
        Function::K0 => ("A", "B"),
    };
    Ok(Representation {
        function: entry.function,
        kind: RepKind::MellinParametric,
        series,
        parameters: vec![(pa.into(), AffineForm::constant(a.clone())), (pb.into(), b.clone())],
    })
}

/// `cos(u) = Σ φ_n Γ(1/2) u^{2n} / (Γ(n + 1/2) 4^n)`, argument hook `u`.
pub fn cos_series(d: &mut Derivation, hint: &str) -> Result<BracketSeries> {
    let n = d.fresh.index(hint);
    let f = AffineForm::symbol(n.clone());
    let coefficient = GammaExpr::gamma(AffineForm::constant(rat(1, 2)))
        * GammaExpr::gamma_pow(f.add_constant(&rat(1, 2)), -1)
        * GammaExpr::power(int(4), -&f);
    let out = BracketSeries::new(vec![n], coefficient, [("u".to_string(), f.scale(&int(2)))].into(), vec![])?;
    d.record(Rule::Expand, "cos(u)", vec![], out.to_string());
    Ok(out)
}

/// `exp(-u) = Σ φ_i u^i`, argument hook `u`.
pub fn exp_series(d: &mut Derivation, hint: &str) -> Result<BracketSeries> {
    let i = d.fresh.index(hint);
    let out = BracketSeries::new(
        vec![i.clone()],
        GammaExpr::one(),
        [("u".to_string(), AffineForm::symbol(i))].into(),
        vec![],
    )?;
    d.record(Rule::Expand, "exp(-u)", vec![], out.to_string());
    Ok(out)
}

/// `(a_1 + ... + a_r)^power` by rule P2.
pub fn binomial(
    d: &mut Derivation,
    terms: &[MultinomialTerm],
    power: &AffineForm,
    hints: &[&str],
) -> Result<BracketSeries> {
    d.p2(terms, power, hints)
}

fn scales(pairs: &[(&str, i64)]) -> BTreeMap<String, Rational> {
    pairs.iter().map(|(v, k)| (v.to_string(), int(*k))).collect()
}

/// `K₀(ξ) = ∫₀^∞ cos(ξt) (t² + 1)^{-1/2} dt`, expanded and integrated in `t`.
fn k0_three_index(d: &mut Derivation) -> Result<BracketSeries> {
    let cos = cos_series(d, "n")?;
    let n = cos.indices()[0].clone();
    let cos = d.distribute(&cos, "u", &scales(&[(XI, 1), ("t", 1)]))?;
    let root = d.p2(
        &[MultinomialTerm::monomial("t", int(2)), MultinomialTerm::one()],
        &AffineForm::constant(rat(-1, 2)),
        &["m", "l"],
    )?;
    let s = d.product(&cos, &root)?;
    let s = d.product(&s, &BracketSeries::weight([("t".to_string(), AffineForm::constant(int(1)))]))?;
    let s = d.p1(&s, "t")?;
    let last = s.brackets().len() - 1;
    d.lemma(&s, last, &n)
}

/// `Ei(-ξ) = -∫₀^∞ exp(-(z+ξ)) / (z+ξ) dz`; the sum over the `z` power is
/// removed against its own bracket.
fn ei_two_index(d: &mut Derivation) -> Result<BracketSeries> {
    let e = exp_series(d, "i")?;
    let power = e.exponent("u").cloned().expect("exp series carries its hook") - AffineForm::constant(int(1));
    let e = e.distribute_exponent("u", &BTreeMap::new())?;
    let binom =
        d.p2(&[MultinomialTerm::monomial("z", int(1)), MultinomialTerm::monomial(XI, int(1))], &power, &["j", "k"])?;
    let j = binom.indices()[0].clone();
    let s = d.product(&e, &binom)?.scaled(&int(-1));
    let s = d.product(&s, &BracketSeries::weight([("z".to_string(), AffineForm::constant(int(1)))]))?;
    let s = d.p1(&s, "z")?;
    let using = s.brackets().last().cloned().expect("P1 appended a bracket");
    d.eliminate(&s, &j, &using)
}

fn k0_divergent(d: &mut Derivation) -> Result<BracketSeries> {
    let n = d.fresh.index("n");
    let f = AffineForm::symbol(n.clone());
    let coefficient = GammaExpr::rational(rat(1, 2)) * GammaExpr::gamma(-&f) * GammaExpr::power(int(4), -&f);
    BracketSeries::new(vec![n], coefficient.simplify(), [(XI.to_string(), f.scale(&int(2)))].into(), vec![])
}

fn k0_null(d: &mut Derivation) -> Result<BracketSeries> {
    let n = d.fresh.index("n");
    let f = AffineForm::symbol(n.clone());
    let coefficient = GammaExpr::power(int(4), f.clone())
        * GammaExpr::gamma_pow(f.add_constant(&rat(1, 2)), 2)
        * GammaExpr::gamma_pow(-&f, -1);
    let exponent = f.scale(&int(-2)).add_constant(&int(-1));
    BracketSeries::new(vec![n], coefficient.simplify(), [(XI.to_string(), exponent)].into(), vec![])
}

fn ei_divergent(d: &mut Derivation) -> Result<BracketSeries> {
    let l = d.fresh.index("l");
    let f = AffineForm::symbol(l.clone());
    BracketSeries::new(vec![l], GammaExpr::linear(f.clone(), -1), [(XI.to_string(), f)].into(), vec![])
}

/// Default generator parameters: the choices that reproduce the divergent
/// series.
pub fn default_mellin_params(function: Function) -> (Rational, AffineForm) {
    match function {
        Function::Ei => (int(1), AffineForm::zero()),
        Function::K0 => (int(2), AffineForm::zero()),
    }
}

/// Mellin-derived series with explicit parameters, recorded in the trace.
pub fn mellin_series(
    d: &mut Derivation,
    function: Function,
    a: &Rational,
    b: &AffineForm,
    hint: &str,
) -> Result<Representation> {
    let index = d.fresh.index(hint);
    let rep = mellin_to_series(&MellinEntry::of(function), a, b, &index)?;
    d.record(
        Rule::MellinSeries,
        format!("{function}: a = {}, b = {b}", crate::algebra::rational::format(a)),
        vec![MellinEntry::of(function).transform.to_string()],
        rep.series.to_string(),
    );
    Ok(rep)
}

/// A fresh instance of a catalog representation.
pub fn catalog_get(d: &mut Derivation, function: Function, kind: RepKind) -> Result<Representation> {
    let series = match (function, kind) {
        (Function::K0, RepKind::BracketSeries3Index) => k0_three_index(d)?,
        (Function::K0, RepKind::Divergent) => k0_divergent(d)?,
        (Function::K0, RepKind::Null) => k0_null(d)?,
        (Function::Ei, RepKind::BracketSeries2Index) => ei_two_index(d)?,
        (Function::Ei, RepKind::Divergent) => ei_divergent(d)?,
        (f, RepKind::MellinParametric) => {
            let (a, b) = default_mellin_params(f);
            let hint = if f == Function::Ei { "l" } else { "n" };
            return mellin_series(d, f, &a, &b, hint);
        }
        (f, k) => return Err(Error::UnknownRepresentation(format!("{f} has no {k} representation"))),
    };
    Ok(Representation { function, kind, series, parameters: vec![] })
}

/// Every catalog pair.
pub fn catalog_entries() -> Vec<(Function, RepKind)> {
    let mut out = Vec::new();
    for f in [Function::K0, Function::Ei] {
        for k in RepKind::ALL {
            let mut scratch = Derivation::new();
            if catalog_get(&mut scratch, f, k).is_ok() {
                out.push((f, k));
            }
        }
    }
    out
}

/// Substitutes `ξ = Π var^{k}` into a representation.
pub fn instantiate(
    d: &mut Derivation,
    rep: &Representation,
    argument: &BTreeMap<String, Rational>,
) -> Result<BracketSeries> {
    if rep.series.exponent(XI).is_none() {
        return Err(Error::InvalidArgument(format!("{} {} has no argument hook", rep.function, rep.kind)));
    }
    d.distribute(&rep.series, XI, argument)
}
