use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::rational::{self, Rational};
use super::symbol::{Symbol, SymbolKind};
use crate::error::{Error, Result};

/// `constant + sum(coeff * symbol)` with exact rational coefficients.
///
/// Zero coefficients are never stored, so derived equality and ordering are
/// structural. The derived order compares the sorted term list first and then
/// the constant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineForm {
    terms: BTreeMap<Symbol, Rational>,
    constant: Rational,
}

pub type Bindings = BTreeMap<Symbol, AffineForm>;

impl AffineForm {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new(), constant: Rational::zero() }
    }

    pub fn constant(c: Rational) -> Self {
        Self { terms: BTreeMap::new(), constant: c }
    }

    pub fn symbol(s: Symbol) -> Self {
        Self::term(s, Rational::one())
    }

    pub fn term(s: Symbol, coeff: Rational) -> Self {
        let mut f = Self::zero();
        f.add_term(s, coeff);
        f
    }

    pub fn from_parts(terms: impl IntoIterator<Item = (Symbol, Rational)>, constant: Rational) -> Self {
        let mut f = Self::constant(constant);
        for (s, c) in terms {
            f.add_term(s, c);
        }
        f
    }

    fn add_term(&mut self, s: Symbol, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(s) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<Symbol, Rational> {
        &self.terms
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn coeff(&self, s: &Symbol) -> Rational {
        self.terms.get(s).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.terms.keys()
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.terms.contains_key(s)
    }

    pub fn has_kind(&self, kind: SymbolKind) -> bool {
        self.terms.keys().any(|s| s.kind() == kind)
    }

    /// The symbolic part, without the constant.
    pub fn linear_part(&self) -> AffineForm {
        Self { terms: self.terms.clone(), constant: Rational::zero() }
    }

    pub fn with_constant(&self, c: Rational) -> AffineForm {
        Self { terms: self.terms.clone(), constant: c }
    }

    /// Drops the given symbol's term.
    pub fn without(&self, s: &Symbol) -> AffineForm {
        let mut out = self.clone();
        out.terms.remove(s);
        out
    }

    /// The first stored coefficient in symbol order, if any.
    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.values().next()
    }

    pub fn scale(&self, k: &Rational) -> AffineForm {
        if k.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(s, c)| (s.clone(), c * k)).collect(), constant: &self.constant * k }
    }

    pub fn add_constant(&self, c: &Rational) -> AffineForm {
        Self { terms: self.terms.clone(), constant: &self.constant + c }
    }

    /// Replaces every bound symbol by its form. A binding whose replacement
    /// mentions any bound symbol is rejected.
    pub fn substitute(&self, bindings: &Bindings) -> Result<AffineForm> {
        check_acyclic(bindings)?;
        Ok(self.substitute_unchecked(bindings))
    }

    pub(crate) fn substitute_unchecked(&self, bindings: &Bindings) -> AffineForm {
        let mut out = AffineForm::constant(self.constant.clone());
        for (s, c) in &self.terms {
            match bindings.get(s) {
                Some(rep) => out = out + rep.scale(c),
                None => out.add_term(s.clone(), c.clone()),
            }
        }
        out
    }

    /// Solves `self = 0` for `target`; errors when its coefficient is zero.
    pub fn solve_for(&self, target: &Symbol) -> Result<AffineForm> {
        let c = self.coeff(target);
        if c.is_zero() {
            return Err(Error::ZeroCoefficient { symbol: target.to_string(), bracket: self.to_string() });
        }
        Ok(self.without(target).scale(&(-c.recip())))
    }

    pub fn eval(&self, values: &BTreeMap<Symbol, Complex64>) -> Result<Complex64> {
        let mut acc = Complex64::new(rational::to_f64(&self.constant), 0.0);
        for (s, c) in &self.terms {
            let v = values.get(s).ok_or_else(|| Error::UnboundSymbol(s.to_string()))?;
            acc += v * rational::to_f64(c);
        }
        Ok(acc)
    }

    /// Substitutes exact rational values; unbound symbols stay symbolic.
    pub fn eval_exact(&self, values: &BTreeMap<Symbol, Rational>) -> AffineForm {
        let bindings: Bindings = values.iter().map(|(s, v)| (s.clone(), AffineForm::constant(v.clone()))).collect();
        self.substitute_unchecked(&bindings)
    }

    pub fn rename(&self, renames: &BTreeMap<Symbol, Symbol>) -> AffineForm {
        let mut out = AffineForm::constant(self.constant.clone());
        for (s, c) in &self.terms {
            out.add_term(renames.get(s).cloned().unwrap_or_else(|| s.clone()), c.clone());
        }
        out
    }
}

fn check_acyclic(bindings: &Bindings) -> Result<()> {
    let bound: BTreeSet<&Symbol> = bindings.keys().collect();
    for rep in bindings.values() {
        if let Some(s) = rep.symbols().find(|s| bound.contains(s)) {
            return Err(Error::CyclicBinding(s.to_string()));
        }
    }
    Ok(())
}

impl Add for AffineForm {
    type Output = AffineForm;
    fn add(mut self, rhs: AffineForm) -> AffineForm {
        self.constant += rhs.constant;
        for (s, c) in rhs.terms {
            self.add_term(s, c);
        }
        self
    }
}

impl Add for &AffineForm {
    type Output = AffineForm;
    fn add(self, rhs: &AffineForm) -> AffineForm {
        self.clone() + rhs.clone()
    }
}

impl Neg for AffineForm {
    type Output = AffineForm;
    fn neg(self) -> AffineForm {
        self.scale(&-Rational::one())
    }
}

impl Neg for &AffineForm {
    type Output = AffineForm;
    fn neg(self) -> AffineForm {
        self.scale(&-Rational::one())
    }
}

impl Sub for AffineForm {
    type Output = AffineForm;
    fn sub(self, rhs: AffineForm) -> AffineForm {
        self + (-rhs)
    }
}

impl Sub for &AffineForm {
    type Output = AffineForm;
    fn sub(self, rhs: &AffineForm) -> AffineForm {
        self.clone() - rhs.clone()
    }
}

impl Mul<&Rational> for &AffineForm {
    type Output = AffineForm;
    fn mul(self, k: &Rational) -> AffineForm {
        self.scale(k)
    }
}

impl From<Symbol> for AffineForm {
    fn from(s: Symbol) -> Self {
        AffineForm::symbol(s)
    }
}

impl From<Rational> for AffineForm {
    fn from(c: Rational) -> Self {
        AffineForm::constant(c)
    }
}

impl fmt::Display for AffineForm {
    /// `alpha/3 + beta/3 - 1/2` style.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, c) in &self.terms {
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            if mag.is_one() {
                write!(f, "{s}")?;
            } else if mag.numer().is_one() {
                write!(f, "{s}/{}", mag.denom())?;
            } else if rational::is_integer(&mag) {
                write!(f, "{}{s}", mag.numer())?;
            } else {
                write!(f, "{}{s}/{}", mag.numer(), mag.denom())?;
            }
        }
        if first {
            return f.write_str(&rational::format(&self.constant));
        }
        if !self.constant.is_zero() {
            let sep = if self.constant.is_negative() { " - " } else { " + " };
            write!(f, "{sep}{}", rational::format(&self.constant.abs()))?;
        }
        Ok(())
    }
}
