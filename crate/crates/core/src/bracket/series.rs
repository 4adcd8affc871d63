use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::algebra::{AffineForm, Bindings, GammaExpr, Rational, Symbol, SymbolKind};
use crate::error::{Error, Result};

/// Formal symbol `<a>` standing for `∫₀^∞ x^{a-1} dx`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Bracket {
    arg: AffineForm,
}

impl Bracket {
    /// Rejects arguments with no index or contour variable.
    pub fn new(arg: AffineForm) -> Result<Self> {
        if !arg.has_kind(SymbolKind::Index) && !arg.has_kind(SymbolKind::ContourVar) {
            return Err(Error::ParameterOnlyBracket(arg.to_string()));
        }
        Ok(Self { arg })
    }

    pub fn arg(&self) -> &AffineForm {
        &self.arg
    }

    pub fn substitute(&self, bindings: &Bindings) -> Result<Self> {
        Self::new(self.arg.substitute(bindings)?)
    }

    pub fn rename(&self, renames: &BTreeMap<Symbol, Symbol>) -> Self {
        Self { arg: self.arg.rename(renames) }
    }
}

impl<'de> Deserialize<'de> for Bracket {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let arg = AffineForm::deserialize(d)?;
        Bracket::new(arg).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.arg)
    }
}

/// `Σ_{indices} φ_{indices} · coefficient · Π var^{exponent} · Π brackets`.
///
/// Every listed index carries the indicator `φ_n = (-1)^n / Γ(n+1)`
/// implicitly. Exponents are stored in bracket convention: a stored `e` for
/// `x` stands for `x^{e-1}` once an integration weight is attached, and for
/// the plain power `x^e` in a function representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketSeries {
    indices: Vec<Symbol>,
    coefficient: GammaExpr,
    exponents: BTreeMap<String, AffineForm>,
    brackets: Vec<Bracket>,
}

impl BracketSeries {
    pub fn new(
        indices: Vec<Symbol>,
        coefficient: GammaExpr,
        exponents: BTreeMap<String, AffineForm>,
        brackets: Vec<Bracket>,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for i in &indices {
            if !i.is_index() {
                return Err(Error::InvalidArgument(format!("`{i}` is not an index symbol")));
            }
            if !seen.insert(i) {
                return Err(Error::IndexCollision(i.to_string()));
            }
        }
        let mut exponents = exponents;
        exponents.retain(|_, e| !e.is_zero());
        Ok(Self { indices, coefficient, exponents, brackets })
    }

    /// The series with one term and coefficient 1.
    pub fn unit() -> Self {
        Self::constant(GammaExpr::one())
    }

    pub fn constant(coefficient: GammaExpr) -> Self {
        Self { indices: vec![], coefficient, exponents: BTreeMap::new(), brackets: vec![] }
    }

    /// Integration weight `Π var^{e-1}`, stored as `{var: e}`.
    pub fn weight(exponents: impl IntoIterator<Item = (String, AffineForm)>) -> Self {
        let mut s = Self::unit();
        for (v, e) in exponents {
            if !e.is_zero() {
                s.exponents.insert(v, e);
            }
        }
        s
    }

    pub fn indices(&self) -> &[Symbol] {
        &self.indices
    }

    pub fn coefficient(&self) -> &GammaExpr {
        &self.coefficient
    }

    pub fn exponents(&self) -> &BTreeMap<String, AffineForm> {
        &self.exponents
    }

    pub fn brackets(&self) -> &[Bracket] {
        &self.brackets
    }

    pub fn exponent(&self, var: &str) -> Option<&AffineForm> {
        self.exponents.get(var)
    }

    pub fn with_coefficient(&self, coefficient: GammaExpr) -> Self {
        Self { coefficient, ..self.clone() }
    }

    pub fn scaled(&self, k: &Rational) -> Self {
        self.with_coefficient(self.coefficient.scale(k))
    }

    /// Substitutes into coefficient, exponents, and brackets.
    pub fn substitute(&self, bindings: &Bindings) -> Result<Self> {
        let brackets = self.brackets.iter().map(|b| b.substitute(bindings)).collect::<Result<Vec<_>>>()?;
        let mut exponents = BTreeMap::new();
        for (v, e) in &self.exponents {
            let e = e.substitute(bindings)?;
            if !e.is_zero() {
                exponents.insert(v.clone(), e);
            }
        }
        Ok(Self {
            indices: self.indices.clone(),
            coefficient: self.coefficient.substitute(bindings)?.simplify(),
            exponents,
            brackets,
        })
    }

    pub(crate) fn drop_index(&mut self, target: &Symbol) {
        self.indices.retain(|i| i != target);
    }

    pub(crate) fn remove_bracket(&mut self, position: usize) -> Bracket {
        self.brackets.remove(position)
    }

    pub(crate) fn take_exponent(&mut self, var: &str) -> Option<AffineForm> {
        self.exponents.remove(var)
    }

    pub(crate) fn push_bracket(&mut self, b: Bracket) {
        self.brackets.push(b);
    }

    pub(crate) fn set_bracket(&mut self, position: usize, b: Bracket) {
        self.brackets[position] = b;
    }

    pub(crate) fn add_exponent(&mut self, var: &str, e: &AffineForm) {
        let slot = self.exponents.entry(var.to_string()).or_insert_with(AffineForm::zero);
        *slot = &*slot + e;
        if slot.is_zero() {
            self.exponents.remove(var);
        }
    }

    /// Position of the first bracket mentioning `s` with nonzero coefficient.
    pub fn bracket_with(&self, s: &Symbol) -> Option<usize> {
        self.brackets.iter().position(|b| b.arg().contains(s))
    }

    /// Every symbol an index of this series must occur in.
    pub fn unused_indices(&self) -> Vec<Symbol> {
        self.indices
            .iter()
            .filter(|i| {
                !self.coefficient.mentions(i)
                    && !self.exponents.values().any(|e| e.contains(i))
                    && !self.brackets.iter().any(|b| b.arg().contains(i))
            })
            .cloned()
            .collect()
    }

    /// Replaces the formal argument exponent `hook` by contributions on the
    /// integration variables: `var` gains `scale[var] * hook_exponent`.
    pub fn distribute_exponent(&self, hook: &str, scales: &BTreeMap<String, Rational>) -> Result<Self> {
        let mut out = self.clone();
        let power = out.exponents.remove(hook).ok_or_else(|| Error::VariableAbsent(hook.to_string()))?;
        for (var, k) in scales {
            out.add_exponent(var, &power.scale(k));
        }
        Ok(out)
    }

    /// Renames indices to `_0, _1, ...` in list order and simplifies the
    /// coefficient; two series denote the same object when these agree.
    pub fn canonical(&self) -> Self {
        let renames: BTreeMap<Symbol, Symbol> =
            self.indices.iter().enumerate().map(|(k, s)| (s.clone(), Symbol::index(format!("_{k}")))).collect();
        self.rename(&renames)
    }

    pub fn rename(&self, renames: &BTreeMap<Symbol, Symbol>) -> Self {
        Self {
            indices: self.indices.iter().map(|s| renames.get(s).cloned().unwrap_or_else(|| s.clone())).collect(),
            coefficient: self.coefficient.rename(renames).simplify(),
            exponents: self.exponents.iter().map(|(v, e)| (v.clone(), e.rename(renames))).collect(),
            brackets: self.brackets.iter().map(|b| b.rename(renames)).collect(),
        }
    }

    /// Canonical equality up to index names.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }

    pub(crate) fn from_raw(
        indices: Vec<Symbol>,
        coefficient: GammaExpr,
        exponents: BTreeMap<String, AffineForm>,
        brackets: Vec<Bracket>,
    ) -> Self {
        Self { indices, coefficient, exponents, brackets }
    }
}

impl fmt::Display for BracketSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.indices.is_empty() {
            let names: Vec<&str> = self.indices.iter().map(|s| s.name()).collect();
            write!(f, "Σ_{{{0}}} φ_{{{0}}} ", names.join(","))?;
        }
        write!(f, "[{}]", self.coefficient)?;
        for (v, e) in &self.exponents {
            write!(f, " {v}^({e})")?;
        }
        for b in &self.brackets {
            write!(f, " {b}")?;
        }
        Ok(())
    }
}

/// `|q|` for exact rationals.
pub(crate) fn abs(q: &Rational) -> Rational {
    q.abs()
}
