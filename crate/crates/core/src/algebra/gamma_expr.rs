//! Products of gamma functions, rational powers, and affine factors.
//!
//! A [`GammaExpr`] is `sign * constant * Π Γ(arg)^k * Π base^exponent * Π form^k`.
//! Construction and multiplication keep the raw factor lists;
//! [`GammaExpr::simplify`] produces the canonical form:
//!
//! * identical gamma arguments, power bases, and affine forms are merged;
//! * gamma arguments are shifted by integers with `Γ(x + 1) = x Γ(x)` until
//!   the constant term lies in `[0, 1)`; pure-constant arguments collapse to a
//!   rational multiple of `Γ(r)` with `0 < r < 1`, to a factorial, or to a
//!   rational multiple of the pole representative `Γ(0)`;
//! * affine factors are scaled so that their first coefficient is `1`;
//! * power bases are reduced to `> 1` and not a perfect power, with the
//!   integer part of the exponent's constant folded into the rational constant;
//! * the sign is carried separately and the constant is nonnegative.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::affine::{AffineForm, Bindings};
use super::rational::{self, int, Rational};
use super::symbol::Symbol;
use crate::error::Result;
use crate::numerics::gamma::{is_pole, ln_gamma};

/// Integer shifts larger than this are left unexpanded.
const MAX_SHIFT: i64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GammaFactor {
    pub arg: AffineForm,
    pub power: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PowerFactor {
    /// Strictly positive.
    pub base: Rational,
    pub exponent: AffineForm,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearFactor {
    pub form: AffineForm,
    pub power: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GammaExpr {
    pub(crate) sign: i8,
    pub(crate) constant: Rational,
    pub(crate) gammas: Vec<GammaFactor>,
    pub(crate) powers: Vec<PowerFactor>,
    pub(crate) linears: Vec<LinearFactor>,
}

/// Result of a floating-point evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NumericValue {
    Finite(Complex64),
    /// A gamma factor with positive power sits on a pole, or an affine
    /// factor with negative power vanishes.
    Divergent,
}

impl NumericValue {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            NumericValue::Finite(v) => Some(v),
            NumericValue::Divergent => None,
        }
    }
}

impl GammaExpr {
    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn rational(c: Rational) -> Self {
        let sign = if c.is_negative() { -1 } else { 1 };
        Self { sign, constant: c.abs(), gammas: vec![], powers: vec![], linears: vec![] }
    }

    pub fn gamma(arg: AffineForm) -> Self {
        Self::gamma_pow(arg, 1)
    }

    pub fn gamma_pow(arg: AffineForm, power: i64) -> Self {
        let mut e = Self::one();
        if power != 0 {
            e.gammas.push(GammaFactor { arg, power });
        }
        e
    }

    /// `base^exponent`; panics unless `base > 0`.
    pub fn power(base: Rational, exponent: AffineForm) -> Self {
        assert!(base.is_positive(), "power base must be positive, got {base}");
        let mut e = Self::one();
        e.powers.push(PowerFactor { base, exponent });
        e
    }

    pub fn linear(form: AffineForm, power: i64) -> Self {
        let mut e = Self::one();
        if power != 0 {
            e.linears.push(LinearFactor { form, power });
        }
        e
    }

    /// Builds from raw parts; nothing is merged or reordered.
    pub fn from_parts(
        sign: i8,
        constant: Rational,
        gammas: Vec<GammaFactor>,
        powers: Vec<PowerFactor>,
        linears: Vec<LinearFactor>,
    ) -> Self {
        Self { sign, constant, gammas, powers, linears }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    /// `sign * constant`.
    pub fn signed_constant(&self) -> Rational {
        if self.sign < 0 {
            -self.constant.clone()
        } else {
            self.constant.clone()
        }
    }

    pub fn gammas(&self) -> &[GammaFactor] {
        &self.gammas
    }

    pub fn powers(&self) -> &[PowerFactor] {
        &self.powers
    }

    pub fn linears(&self) -> &[LinearFactor] {
        &self.linears
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero()
    }

    /// A pure rational with no factors.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.gammas.is_empty() && self.powers.is_empty() && self.linears.is_empty() {
            Some(self.signed_constant())
        } else {
            None
        }
    }

    pub fn forms(&self) -> impl Iterator<Item = &AffineForm> {
        self.gammas
            .iter()
            .map(|g| &g.arg)
            .chain(self.powers.iter().map(|p| &p.exponent))
            .chain(self.linears.iter().map(|l| &l.form))
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.forms().flat_map(|f| f.symbols().cloned()).collect()
    }

    pub fn mentions(&self, s: &Symbol) -> bool {
        self.forms().any(|f| f.contains(s))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        self * &Self::rational(k.clone())
    }

    /// Integer power; zero to a negative power panics.
    pub fn pow(&self, k: i64) -> Self {
        if k == 0 {
            return Self::one();
        }
        let constant = rational::pow_int(&self.constant, k).expect("zero expression raised to a negative power");
        let sign = if self.sign < 0 && k % 2 != 0 { -1 } else { 1 };
        Self {
            sign,
            constant,
            gammas: self.gammas.iter().map(|g| GammaFactor { arg: g.arg.clone(), power: g.power * k }).collect(),
            powers: self
                .powers
                .iter()
                .map(|p| PowerFactor { base: p.base.clone(), exponent: p.exponent.scale(&int(k)) })
                .collect(),
            linears: self.linears.iter().map(|l| LinearFactor { form: l.form.clone(), power: l.power * k }).collect(),
        }
    }

    pub fn recip(&self) -> Self {
        self.pow(-1)
    }

    /// Applies `bindings` to every affine form. The result is not simplified.
    pub fn substitute(&self, bindings: &Bindings) -> Result<Self> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        // validates acyclicity once
        AffineForm::zero().substitute(bindings)?;
        Ok(self.map_forms(|f| f.substitute_unchecked(bindings)))
    }

    pub(crate) fn map_forms(&self, mut f: impl FnMut(&AffineForm) -> AffineForm) -> Self {
        Self {
            sign: self.sign,
            constant: self.constant.clone(),
            gammas: self.gammas.iter().map(|g| GammaFactor { arg: f(&g.arg), power: g.power }).collect(),
            powers: self
                .powers
                .iter()
                .map(|p| PowerFactor { base: p.base.clone(), exponent: f(&p.exponent) })
                .collect(),
            linears: self.linears.iter().map(|l| LinearFactor { form: f(&l.form), power: l.power }).collect(),
        }
    }

    pub fn rename(&self, renames: &BTreeMap<Symbol, Symbol>) -> Self {
        self.map_forms(|f| f.rename(renames))
    }

    /// Substitutes exact values and simplifies.
    pub fn eval_exact(&self, values: &BTreeMap<Symbol, Rational>) -> Self {
        self.map_forms(|f| f.eval_exact(values)).simplify()
    }

    /// True when a positive-power gamma factor has a constant nonpositive
    /// integer argument, or an affine factor with negative power is the
    /// constant zero.
    pub fn is_divergent(&self) -> bool {
        let canonical = self.simplify();
        let pole = |a: &AffineForm| {
            a.is_constant() && rational::is_integer(a.constant_term()) && !a.constant_term().is_positive()
        };
        canonical.gammas.iter().any(|g| g.power > 0 && pole(&g.arg))
            || canonical.linears.iter().any(|l| l.power < 0 && l.form.is_zero())
    }

    /// Canonical form; see the module documentation.
    pub fn simplify(&self) -> Self {
        let mut acc = self.signed_constant();
        if acc.is_zero() {
            return Self::zero();
        }

        let mut merged_gammas: BTreeMap<AffineForm, i64> = BTreeMap::new();
        for g in &self.gammas {
            *merged_gammas.entry(g.arg.clone()).or_default() += g.power;
        }

        let mut raw_linears: Vec<(AffineForm, i64)> = self.linears.iter().map(|l| (l.form.clone(), l.power)).collect();
        let mut gammas: BTreeMap<AffineForm, i64> = BTreeMap::new();
        for (arg, p) in merged_gammas {
            if p == 0 {
                continue;
            }
            let (rep, factor) = shift_gamma(&arg, p, &mut raw_linears);
            acc *= factor;
            if let Some(rep) = rep {
                *gammas.entry(rep).or_default() += p;
            }
        }
        gammas.retain(|_, p| *p != 0);

        let mut linears: BTreeMap<AffineForm, i64> = BTreeMap::new();
        for (form, p) in raw_linears {
            if p == 0 {
                continue;
            }
            if form.is_constant() {
                let c = form.constant_term();
                if c.is_zero() {
                    *linears.entry(AffineForm::zero()).or_default() += p;
                } else {
                    acc *= rational::pow_int(c, p).expect("nonzero base");
                }
                continue;
            }
            let lead = form.leading_coeff().cloned().expect("non-constant form has a term");
            acc *= rational::pow_int(&lead, p).expect("nonzero lead");
            *linears.entry(form.scale(&lead.recip())).or_default() += p;
        }
        linears.retain(|_, p| *p != 0);

        let mut powers: BTreeMap<Rational, AffineForm> = BTreeMap::new();
        for pf in &self.powers {
            if pf.base.is_one() || pf.exponent.is_zero() {
                continue;
            }
            let (base, exponent) = if pf.base < Rational::one() {
                (pf.base.recip(), -&pf.exponent)
            } else {
                (pf.base.clone(), pf.exponent.clone())
            };
            let (root, k) = rational::perfect_power(&base);
            let exponent = exponent.scale(&int(k as i64));
            let slot = powers.entry(root).or_insert_with(AffineForm::zero);
            *slot = &*slot + &exponent;
        }
        let mut power_list = Vec::new();
        for (base, exponent) in powers {
            let whole = rational::floor(exponent.constant_term());
            let exponent = if whole.is_zero() {
                exponent
            } else {
                match whole.to_i64().filter(|w| w.abs() <= MAX_SHIFT) {
                    Some(w) => {
                        acc *= rational::pow_int(&base, w).expect("positive base");
                        exponent.add_constant(&-Rational::from_integer(whole))
                    }
                    None => exponent,
                }
            };
            if !exponent.is_zero() {
                power_list.push(PowerFactor { base, exponent });
            }
        }

        let pole = AffineForm::zero();
        let pole_power = gammas.get(&pole).copied().unwrap_or(0);
        let zero_power = linears.get(&pole).copied().unwrap_or(0);
        let divergent = pole_power > 0 || zero_power < 0;
        let vanishing = pole_power < 0 || zero_power > 0;
        if vanishing && !divergent {
            return Self::zero();
        }

        let sign = if acc.is_negative() { -1 } else { 1 };
        Self {
            sign,
            constant: acc.abs(),
            gammas: gammas.into_iter().map(|(arg, power)| GammaFactor { arg, power }).collect(),
            powers: power_list,
            linears: linears.into_iter().map(|(form, power)| LinearFactor { form, power }).collect(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.simplify()
    }

    /// Canonical equality.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.simplify() == other.simplify()
    }

    /// Floating-point value with every symbol bound in `values`.
    pub fn eval_numeric(&self, values: &BTreeMap<Symbol, Complex64>) -> Result<NumericValue> {
        let mut divergent = false;
        let mut vanishing = self.constant.is_zero();
        let mut log_sum = Complex64::new(0.0, 0.0);
        for g in &self.gammas {
            let z = g.arg.eval(values)?;
            if is_pole(z) {
                if g.power > 0 {
                    divergent = true;
                } else {
                    vanishing = true;
                }
            } else {
                log_sum += ln_gamma(z) * g.power as f64;
            }
        }
        for p in &self.powers {
            let e = p.exponent.eval(values)?;
            log_sum += e * rational::ln_abs(&p.base);
        }
        for l in &self.linears {
            let v = l.form.eval(values)?;
            if v == Complex64::new(0.0, 0.0) {
                if l.power > 0 {
                    vanishing = true;
                } else {
                    divergent = true;
                }
            } else {
                log_sum += v.ln() * l.power as f64;
            }
        }
        if divergent {
            return Ok(NumericValue::Divergent);
        }
        if vanishing {
            return Ok(NumericValue::Finite(Complex64::new(0.0, 0.0)));
        }
        log_sum += rational::ln_abs(&self.constant);
        Ok(NumericValue::Finite(log_sum.exp() * f64::from(self.sign)))
    }
}

/// Rewrites `Γ(arg)^p` as `factor * Γ(rep)^p` times affine factors pushed
/// onto `linears`. `rep` is `None` when the gamma value is a plain rational.
fn shift_gamma(arg: &AffineForm, p: i64, linears: &mut Vec<(AffineForm, i64)>) -> (Option<AffineForm>, Rational) {
    let c = arg.constant_term();
    let whole = rational::floor(c);
    let Some(k) = whole.to_i64().filter(|k| k.abs() <= MAX_SHIFT) else {
        return (Some(arg.clone()), Rational::one());
    };
    let ipow = |r: Rational, e: i64| rational::pow_int(&r, e).expect("nonzero shift product");
    if arg.is_constant() {
        if rational::is_integer(c) {
            if k >= 1 {
                let fact: BigInt = (1..k).map(BigInt::from).product();
                return (None, ipow(Rational::from_integer(fact), p));
            }
            // Γ(-m) = Γ(0) / Π_{j=1..m} (-j), read as a ratio of residues
            let prod: BigInt = (1..=-k).map(|j| BigInt::from(-j)).product();
            return (Some(AffineForm::zero()), ipow(Rational::from_integer(prod), -p));
        }
        let r = rational::frac(c);
        let mut prod = Rational::one();
        if k > 0 {
            for j in 0..k {
                prod *= &r + int(j);
            }
            return (Some(AffineForm::constant(r)), ipow(prod, p));
        }
        for j in k..0 {
            prod *= &r + int(j);
        }
        return (Some(AffineForm::constant(r)), ipow(prod, -p));
    }
    let base = arg.add_constant(&-Rational::from_integer(whole));
    if k > 0 {
        for j in 0..k {
            linears.push((base.add_constant(&int(j)), p));
        }
    } else {
        for j in k..0 {
            linears.push((base.add_constant(&int(j)), -p));
        }
    }
    (Some(base), Rational::one())
}

impl Mul for &GammaExpr {
    type Output = GammaExpr;
    fn mul(self, rhs: &GammaExpr) -> GammaExpr {
        let mut out = self.clone();
        out.sign *= rhs.sign;
        out.constant *= &rhs.constant;
        out.gammas.extend(rhs.gammas.iter().cloned());
        out.powers.extend(rhs.powers.iter().cloned());
        out.linears.extend(rhs.linears.iter().cloned());
        out
    }
}

impl Mul for GammaExpr {
    type Output = GammaExpr;
    fn mul(self, rhs: GammaExpr) -> GammaExpr {
        &self * &rhs
    }
}

impl Neg for GammaExpr {
    type Output = GammaExpr;
    fn neg(mut self) -> GammaExpr {
        self.sign = -self.sign;
        self
    }
}

impl fmt::Display for GammaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            f.write_str("-")?;
        }
        let mut parts = Vec::new();
        if !self.constant.is_one() || (self.gammas.is_empty() && self.powers.is_empty() && self.linears.is_empty()) {
            parts.push(rational::format(&self.constant));
        }
        let exp = |k: i64| if k == 1 { String::new() } else { format!("^{k}") };
        for g in &self.gammas {
            parts.push(format!("Γ({}){}", g.arg, exp(g.power)));
        }
        for p in &self.powers {
            parts.push(format!("{}^({})", rational::format(&p.base), p.exponent));
        }
        for l in &self.linears {
            parts.push(format!("({}){}", l.form, exp(l.power)));
        }
        f.write_str(&parts.join(" * "))
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use proptest::prelude::*;

    use super::*;
    use crate::algebra::rational::rat;
    use crate::algebra::symbol::{alpha, beta};

    fn af(terms: &[(Symbol, Rational)], c: Rational) -> AffineForm {
        AffineForm::from_parts(terms.iter().cloned(), c)
    }

    fn w() -> Symbol {
        Symbol::parameter("w")
    }

    /// (alpha + beta)/3
    fn s_form() -> AffineForm {
        af(&[(alpha(), rat(1, 3)), (beta(), rat(1, 3))], rat(0, 1))
    }

    pub(crate) fn flagship_rhs() -> GammaExpr {
        crate::reference::printed_rhs()
    }

    fn values(pairs: &[(Symbol, f64)]) -> BTreeMap<Symbol, Complex64> {
        pairs.iter().map(|(s, v)| (s.clone(), Complex64::new(*v, 0.0))).collect()
    }

    #[test]
    fn recurrence_ratio_is_linear_factor() {
        let x = AffineForm::symbol(w());
        let e = GammaExpr::gamma(x.add_constant(&rat(1, 1))) * GammaExpr::gamma(x.clone()).recip();
        assert_eq!(e.simplify(), GammaExpr::linear(x, 1));
    }

    #[test]
    fn flagship_forms_agree_canonically() {
        let via_linear =
            GammaExpr::rational(rat(-1, 1)) * GammaExpr::gamma_pow(s_form(), 2) * GammaExpr::linear(s_form(), -1);
        let via_shift = -(GammaExpr::gamma_pow(s_form(), 2)
            * GammaExpr::gamma(s_form().add_constant(&rat(1, 1))).recip()
            * GammaExpr::gamma(s_form()));
        assert!(via_linear.equivalent(&via_shift));
        assert_eq!(via_linear.simplify(), via_shift.simplify());
    }

    #[test]
    fn identical_gammas_merge() {
        let x = AffineForm::symbol(w());
        let e = GammaExpr::gamma(x.clone()) * GammaExpr::gamma(x.clone());
        assert_eq!(e.simplify(), GammaExpr::gamma_pow(x, 2));
    }

    #[test]
    fn constant_gammas_reduce() {
        // Γ(3) = 2, Γ(5/2) = 3/4 Γ(1/2), Γ(-1/2) = -2 Γ(1/2)
        assert_eq!(GammaExpr::gamma(AffineForm::constant(rat(3, 1))).simplify(), GammaExpr::rational(rat(2, 1)));
        assert_eq!(
            GammaExpr::gamma(AffineForm::constant(rat(5, 2))).simplify(),
            GammaExpr::rational(rat(3, 4)) * GammaExpr::gamma(AffineForm::constant(rat(1, 2)))
        );
        assert_eq!(
            GammaExpr::gamma(AffineForm::constant(rat(-1, 2))).simplify(),
            GammaExpr::rational(rat(-2, 1)) * GammaExpr::gamma(AffineForm::constant(rat(1, 2)))
        );
    }

    #[test]
    fn pole_ratios_are_residue_ratios() {
        // Γ(-3)/Γ(-1) = lim Γ(-3+e)/Γ(-1+e) = 1/((-3)(-2)) = 1/6
        let e = GammaExpr::gamma(AffineForm::constant(rat(-3, 1)))
            * GammaExpr::gamma(AffineForm::constant(rat(-1, 1))).recip();
        assert_eq!(e.simplify(), GammaExpr::rational(rat(1, 6)));
        let lone = GammaExpr::gamma(AffineForm::constant(rat(-2, 1)));
        assert!(lone.is_divergent());
        let reciprocal = lone.recip();
        assert!(reciprocal.simplify().is_zero());
    }

    #[test]
    fn powers_normalize_bases() {
        let x = AffineForm::symbol(w());
        // 4^{x/2} = 2^x and (1/8)^{-x/3} = 2^x
        assert!(GammaExpr::power(rat(4, 1), x.scale(&rat(1, 2)))
            .equivalent(&GammaExpr::power(rat(1, 8), x.scale(&rat(-1, 3)))));
        // 4^{x - 3/2} = 2^{2x} / 8
        assert_eq!(
            GammaExpr::power(rat(4, 1), x.add_constant(&rat(-3, 2))).simplify(),
            GammaExpr::rational(rat(1, 8)) * GammaExpr::power(rat(2, 1), x.scale(&rat(2, 1)))
        );
        // 4^{1/2} = 2
        assert_eq!(
            GammaExpr::power(rat(4, 1), AffineForm::constant(rat(1, 2))).simplify(),
            GammaExpr::rational(rat(2, 1))
        );
    }

    #[test]
    fn linear_factors_normalize() {
        let e = GammaExpr::linear(s_form(), -1);
        let expected = GammaExpr::rational(rat(3, 1))
            * GammaExpr::linear(af(&[(alpha(), rat(1, 1)), (beta(), rat(1, 1))], rat(0, 1)), -1);
        assert_eq!(e.simplify(), expected.simplify());
        let zero = GammaExpr::linear(AffineForm::zero(), -1);
        assert!(zero.is_divergent());
        assert!(GammaExpr::linear(AffineForm::zero(), 1).simplify().is_zero());
    }

    #[test]
    fn gamma_half_squared_is_pi() {
        let e = GammaExpr::gamma_pow(AffineForm::constant(rat(1, 2)), 2);
        let v = e.eval_numeric(&BTreeMap::new()).unwrap().finite().unwrap();
        assert!((v.re - PI).abs() < 1e-14, "{}", v.re - PI);
    }

    #[test]
    fn flagship_at_five_one() {
        let v = flagship_rhs().eval_numeric(&values(&[(alpha(), 5.0), (beta(), 1.0)])).unwrap().finite().unwrap();
        assert!(((v.re + PI / 12.0) / (PI / 12.0)).abs() < 1e-13);
        let c = flagship_rhs().simplify().eval_numeric(&values(&[(alpha(), 5.0), (beta(), 1.0)])).unwrap();
        assert!(((c.finite().unwrap().re + PI / 12.0) / (PI / 12.0)).abs() < 1e-13);
    }

    #[test]
    fn gamma_at_pole_is_divergent() {
        let n = Symbol::index("n");
        let e = GammaExpr::gamma(-AffineForm::symbol(n.clone()));
        assert_eq!(e.eval_numeric(&values(&[(n.clone(), 3.0)])).unwrap(), NumericValue::Divergent);
        let inv = e.recip();
        assert_eq!(inv.eval_numeric(&values(&[(n, 3.0)])).unwrap(), NumericValue::Finite(Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn unbound_symbol_rejected() {
        let e = GammaExpr::gamma(AffineForm::symbol(w()));
        assert!(matches!(e.eval_numeric(&BTreeMap::new()), Err(crate::Error::UnboundSymbol(_))));
    }

    #[test]
    fn recurrence_soundness_on_random_rationals() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let x = AffineForm::symbol(w());
        let ratio = (GammaExpr::gamma(x.add_constant(&rat(1, 1))) * GammaExpr::gamma(x.clone()).recip()).simplify();
        let mut checked = 0;
        while checked < 1000 {
            let q: i64 = rng.gen_range(1..=50);
            let p: i64 = rng.gen_range(1..10 * q);
            let xr = rat(p, q);
            if rational::is_integer(&xr) && xr <= rat(0, 1) {
                continue;
            }
            let xv = rational::to_f64(&xr);
            let v = ratio.eval_numeric(&values(&[(w(), xv)])).unwrap().finite().unwrap().re;
            assert!(((v - xv) / xv).abs() < 1e-12, "x = {xr}");
            // the exact path: constant arguments collapse to the rational itself
            let exact = (GammaExpr::gamma(AffineForm::constant(&xr + rat(1, 1)))
                * GammaExpr::gamma(AffineForm::constant(xr.clone())).recip())
            .simplify();
            assert_eq!(exact.as_rational(), Some(xr));
            checked += 1;
        }
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-12i64..=12, 1i64..=6).prop_map(|(p, q)| rat(p, q))
    }

    fn small_form() -> impl Strategy<Value = AffineForm> {
        let syms = prop::sample::select(vec![alpha(), beta(), Symbol::index("n"), Symbol::index("m")]);
        (prop::collection::vec((syms, small_rational()), 0..3), small_rational())
            .prop_map(|(terms, c)| AffineForm::from_parts(terms, c))
    }

    fn small_expr() -> impl Strategy<Value = GammaExpr> {
        let gam = prop::collection::vec((small_form(), -2i64..=2), 0..4);
        let pow = prop::collection::vec((prop::sample::select(vec![2i64, 3, 4, 6, 8, 9]), small_form()), 0..3);
        let lin = prop::collection::vec((small_form(), -2i64..=2), 0..3);
        (small_rational(), gam, pow, lin).prop_map(|(c, gam, pow, lin)| {
            let mut e = GammaExpr::rational(if c.is_zero() { rat(1, 1) } else { c });
            for (a, p) in gam {
                e = e * GammaExpr::gamma_pow(a, p);
            }
            for (b, x) in pow {
                e = e * GammaExpr::power(rat(b, 1), x);
            }
            for (f, p) in lin {
                e = e * GammaExpr::linear(f, p);
            }
            e
        })
    }

    fn point() -> BTreeMap<Symbol, Complex64> {
        values(&[(alpha(), 2.37), (beta(), 0.61), (Symbol::index("n"), 1.13), (Symbol::index("m"), -0.29)])
    }

    proptest! {
        #[test]
        fn simplify_is_idempotent(e in small_expr()) {
            let once = e.simplify();
            prop_assert_eq!(once.simplify(), once);
        }

        #[test]
        fn simplify_preserves_value(e in small_expr()) {
            let raw = e.eval_numeric(&point()).unwrap();
            let canon = e.simplify().eval_numeric(&point()).unwrap();
            if let (NumericValue::Finite(a), NumericValue::Finite(b)) = (raw, canon) {
                let scale = a.norm().max(1e-300);
                prop_assert!((a - b).norm() / scale < 1e-9, "{} vs {}", a, b);
            }
        }

        #[test]
        fn evaluation_is_multiplicative(a in small_expr(), b in small_expr()) {
            let va = a.eval_numeric(&point()).unwrap();
            let vb = b.eval_numeric(&point()).unwrap();
            let vab = (&a * &b).eval_numeric(&point()).unwrap();
            if let (NumericValue::Finite(x), NumericValue::Finite(y), NumericValue::Finite(z)) = (va, vb, vab) {
                let expect = x * y;
                if expect.norm() > 1e-250 && expect.norm() < 1e250 {
                    prop_assert!((z - expect).norm() / expect.norm() < 1e-10);
                }
            }
        }
    }
}
