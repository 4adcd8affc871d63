use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use super::series::{abs, Bracket, BracketSeries};
use crate::algebra::{AffineForm, GammaExpr, Rational, Symbol};
use crate::error::{Error, Result};

/// Hands out index names that are unique within one derivation.
///
/// A hint is used verbatim the first time and suffixed with a counter after
/// that, so derivations keep the conventional letters (i, k, n, m, l) and
/// reruns produce identical names.
#[derive(Debug, Clone, Default)]
pub struct FreshSupply {
    used: BTreeSet<String>,
    counter: usize,
}

impl FreshSupply {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reserve(&mut self, name: &str) {
        self.used.insert(name.to_string());
    }

    fn name(&mut self, hint: &str) -> String {
        if self.used.insert(hint.to_string()) {
            return hint.to_string();
        }
        loop {
            let candidate = format!("{hint}{}", self.counter);
            self.counter += 1;
            if self.used.insert(candidate.clone()) {
                return candidate;
            }
        }
    }

    pub fn index(&mut self, hint: &str) -> Symbol {
        Symbol::index(self.name(hint))
    }

    pub fn contour(&mut self, hint: &str) -> Symbol {
        Symbol::contour(self.name(hint))
    }
}

/// One summand `coefficient · Π var^{exponent}` of a multinomial base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultinomialTerm {
    pub coefficient: GammaExpr,
    pub exponents: BTreeMap<String, Rational>,
}

impl MultinomialTerm {
    pub fn new(coefficient: GammaExpr, exponents: impl IntoIterator<Item = (String, Rational)>) -> Self {
        Self { coefficient, exponents: exponents.into_iter().collect() }
    }

    /// `var^{power}` with unit coefficient.
    pub fn monomial(var: &str, power: Rational) -> Self {
        Self::new(GammaExpr::one(), [(var.to_string(), power)])
    }

    pub fn one() -> Self {
        Self::new(GammaExpr::one(), [])
    }
}

/// Turns the exponent of `variable` into a bracket: `∫₀^∞ x^{e-1} dx → <e>`.
pub fn rule_p1_integrate(series: &BracketSeries, variable: &str) -> Result<BracketSeries> {
    let mut out = series.clone();
    let e = out.take_exponent(variable).ok_or_else(|| Error::VariableAbsent(variable.to_string()))?;
    out.push_bracket(Bracket::new(e)?);
    Ok(out)
}

/// `(a_1 + ... + a_r)^power → Σ φ a_1^{n_1}...a_r^{n_r} <n_1+...+n_r-power> / Γ(-power)`.
///
/// Term coefficients must be positive rationals so `c^{n}` stays a power
/// factor. The power may mention an index of an enclosing sum, in which case
/// `1/Γ(-power)` carries that index.
pub fn rule_p2_multinomial(terms: &[MultinomialTerm], power: &AffineForm, fresh: &[Symbol]) -> Result<BracketSeries> {
    if terms.is_empty() {
        return Err(Error::EmptyMultinomial);
    }
    if fresh.len() != terms.len() {
        return Err(Error::InvalidShape(format!("{} terms but {} fresh indices", terms.len(), fresh.len())));
    }
    let mut coefficient = GammaExpr::gamma_pow(-power, -1);
    let mut exponents: BTreeMap<String, AffineForm> = BTreeMap::new();
    let mut bracket = -power;
    for (term, n) in terms.iter().zip(fresh) {
        let c = term.coefficient.simplify().as_rational().filter(|c| c.is_positive()).ok_or_else(|| {
            Error::InvalidArgument(format!("multinomial coefficient {} is not a positive rational", term.coefficient))
        })?;
        if !c.is_one() {
            coefficient = coefficient * GammaExpr::power(c, AffineForm::symbol(n.clone()));
        }
        for (var, k) in &term.exponents {
            let slot = exponents.entry(var.clone()).or_insert_with(AffineForm::zero);
            *slot = &*slot + &AffineForm::term(n.clone(), k.clone());
        }
        bracket = bracket + AffineForm::symbol(n.clone());
    }
    BracketSeries::new(fresh.to_vec(), coefficient, exponents, vec![Bracket::new(bracket)?])
}

/// `<a·γ + β> = (1/|a|) <γ + β/a>`; returns the normalized bracket and `1/|a|`.
pub fn lemma_rescale(b: &Bracket, target: &Symbol) -> Result<(Bracket, Rational)> {
    let a = b.arg().coeff(target);
    if a.is_zero() {
        return Err(Error::ZeroCoefficient { symbol: target.to_string(), bracket: b.to_string() });
    }
    let normalized = Bracket::new(b.arg().scale(&a.recip()))?;
    Ok((normalized, abs(&a).recip()))
}

/// Applies [`lemma_rescale`] to one bracket of `series` and folds the
/// prefactor into the coefficient.
pub fn rescale_in_series(series: &BracketSeries, position: usize, target: &Symbol) -> Result<BracketSeries> {
    let b = series
        .brackets()
        .get(position)
        .ok_or_else(|| Error::InvalidArgument(format!("no bracket at position {position}")))?;
    let (nb, k) = lemma_rescale(b, target)?;
    let mut out = series.scaled(&k);
    out.set_bracket(position, nb);
    Ok(out)
}

/// Product of two bracket series with disjoint index names.
pub fn series_product(a: &BracketSeries, b: &BracketSeries) -> Result<BracketSeries> {
    let left: BTreeSet<&Symbol> = a.indices().iter().collect();
    if let Some(s) = b.indices().iter().find(|s| left.contains(s)) {
        return Err(Error::IndexCollision(s.to_string()));
    }
    let mut indices = a.indices().to_vec();
    indices.extend(b.indices().iter().cloned());
    let mut exponents = a.exponents().clone();
    for (v, e) in b.exponents() {
        let slot = exponents.entry(v.clone()).or_insert_with(AffineForm::zero);
        *slot = &*slot + e;
    }
    exponents.retain(|_, e| !e.is_zero());
    let mut brackets = a.brackets().to_vec();
    brackets.extend(b.brackets().iter().cloned());
    Ok(BracketSeries::from_raw(indices, a.coefficient() * b.coefficient(), exponents, brackets))
}

/// Number of sums minus number of brackets.
pub fn complexity_index(s: &BracketSeries) -> i64 {
    s.indices().len() as i64 - s.brackets().len() as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use crate::algebra::symbol::{alpha, beta};

    fn idx(n: &str) -> AffineForm {
        AffineForm::symbol(Symbol::index(n))
    }

    #[test]
    fn p1_moves_exponent_into_bracket() {
        let e = AffineForm::symbol(alpha()) + idx("n").scale(&int(2)) + idx("k").scale(&int(2));
        let s = BracketSeries::new(
            vec![Symbol::index("k"), Symbol::index("n")],
            GammaExpr::one(),
            [("x".to_string(), e.clone())].into(),
            vec![],
        )
        .unwrap();
        let out = rule_p1_integrate(&s, "x").unwrap();
        assert!(out.exponents().is_empty());
        assert_eq!(out.brackets()[0].arg(), &e);
        assert!(matches!(rule_p1_integrate(&s, "y"), Err(Error::VariableAbsent(_))));
    }

    #[test]
    fn p1_rejects_parameter_only_exponent() {
        let s = BracketSeries::weight([("x".to_string(), AffineForm::symbol(alpha()))]);
        assert!(matches!(rule_p1_integrate(&s, "x"), Err(Error::ParameterOnlyBracket(_))));
    }

    #[test]
    fn p2_square_root_expansion() {
        // (t^2 + 1)^(-1/2) with indices m, l
        let terms = [MultinomialTerm::monomial("t", int(2)), MultinomialTerm::one()];
        let fresh = [Symbol::index("m"), Symbol::index("l")];
        let s = rule_p2_multinomial(&terms, &AffineForm::constant(rat(-1, 2)), &fresh).unwrap();
        assert_eq!(s.exponent("t"), Some(&idx("m").scale(&int(2))));
        assert_eq!(s.brackets()[0].arg(), &(idx("m") + idx("l") + AffineForm::constant(rat(1, 2))));
        // 1/Γ(1/2) = 1/sqrt(pi)
        let v = s.coefficient().eval_numeric(&BTreeMap::new()).unwrap().finite().unwrap();
        assert!((v.re - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn p2_power_with_index() {
        // (z + xi)^(i-1) with indices j, k
        let power = idx("i") - AffineForm::constant(int(1));
        let terms = [MultinomialTerm::monomial("z", int(1)), MultinomialTerm::monomial("xi", int(1))];
        let s = rule_p2_multinomial(&terms, &power, &[Symbol::index("j"), Symbol::index("k")]).unwrap();
        assert_eq!(s.brackets()[0].arg(), &(idx("j") + idx("k") - idx("i") + AffineForm::constant(int(1))));
        let expected = GammaExpr::gamma_pow(AffineForm::constant(int(1)) - idx("i"), -1);
        assert!(s.coefficient().equivalent(&expected));
        assert_eq!(s.exponent("xi"), Some(&idx("k")));
    }

    #[test]
    fn p2_errors() {
        let p = AffineForm::constant(int(2));
        assert!(matches!(rule_p2_multinomial(&[], &p, &[]), Err(Error::EmptyMultinomial)));
        let terms = [MultinomialTerm::one()];
        assert!(matches!(rule_p2_multinomial(&terms, &p, &[]), Err(Error::InvalidShape(_))));
        let neg = [MultinomialTerm::new(GammaExpr::rational(int(-1)), [])];
        assert!(rule_p2_multinomial(&neg, &p, &[Symbol::index("n")]).is_err());
    }

    #[test]
    fn lemma_examples() {
        let b = Bracket::new(idx("n").scale(&int(2)) + idx("m").scale(&int(2)) + AffineForm::constant(int(1))).unwrap();
        let (nb, k) = lemma_rescale(&b, &Symbol::index("n")).unwrap();
        assert_eq!(nb.arg(), &(idx("n") + idx("m") + AffineForm::constant(rat(1, 2))));
        assert_eq!(k, rat(1, 2));

        let b =
            Bracket::new(AffineForm::symbol(beta()) + AffineForm::symbol(alpha()) + idx("l").scale(&int(3))).unwrap();
        let (nb, k) = lemma_rescale(&b, &Symbol::index("l")).unwrap();
        assert_eq!(
            nb.arg(),
            &((AffineForm::symbol(alpha()) + AffineForm::symbol(beta())).scale(&rat(1, 3)) + idx("l"))
        );
        assert_eq!(k, rat(1, 3));

        let b = Bracket::new(idx("n")).unwrap();
        assert_eq!(lemma_rescale(&b, &Symbol::index("n")).unwrap(), (b.clone(), int(1)));
        assert!(lemma_rescale(&b, &Symbol::index("m")).is_err());
    }

    #[test]
    fn negative_coefficient_rescale_uses_absolute_value() {
        let b = Bracket::new(AffineForm::symbol(alpha()) - idx("n").scale(&int(2))).unwrap();
        let (nb, k) = lemma_rescale(&b, &Symbol::index("n")).unwrap();
        assert_eq!(k, rat(1, 2));
        assert_eq!(nb.arg(), &(idx("n") - AffineForm::symbol(alpha()).scale(&rat(1, 2))));
    }

    #[test]
    fn product_identity_and_collision() {
        let s = rule_p2_multinomial(
            &[MultinomialTerm::monomial("t", int(2)), MultinomialTerm::one()],
            &AffineForm::constant(rat(-1, 2)),
            &[Symbol::index("m"), Symbol::index("l")],
        )
        .unwrap();
        assert_eq!(series_product(&s, &BracketSeries::unit()).unwrap(), s);
        assert_eq!(series_product(&BracketSeries::unit(), &s).unwrap(), s);
        assert!(matches!(series_product(&s, &s), Err(Error::IndexCollision(_))));
    }

    #[test]
    fn complexity_counts() {
        let one =
            BracketSeries::new(vec![Symbol::index("n")], GammaExpr::one(), [("x".into(), idx("n"))].into(), vec![])
                .unwrap();
        assert_eq!(complexity_index(&one), 1);
    }

    #[test]
    fn fresh_supply_is_deterministic() {
        let mut f = FreshSupply::new();
        assert_eq!(f.index("n").name(), "n");
        assert_eq!(f.index("n").name(), "n0");
        assert_eq!(f.index("m").name(), "m");
        assert_eq!(f.index("n").name(), "n1");
        f.reserve("k");
        assert_eq!(f.index("k").name(), "k2");
    }
}
