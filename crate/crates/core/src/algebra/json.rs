//! Stable JSON encoding for algebra values.
//!
//! Rationals are strings (`"3"`, `"-1/12"`) so big integers survive any JSON
//! reader. Factor lists are written in stored order, so raw (non-canonical)
//! expressions round-trip unchanged.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::affine::AffineForm;
use super::gamma_expr::{GammaExpr, GammaFactor, LinearFactor, PowerFactor};
use super::rational::{self, Rational};
use super::symbol::{Symbol, SymbolKind};

#[derive(Serialize, Deserialize)]
struct SymbolWire {
    name: String,
    kind: SymbolKind,
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SymbolWire { name: self.name().to_string(), kind: self.kind() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = SymbolWire::deserialize(d)?;
        Ok(Symbol::new(w.name, w.kind))
    }
}

/// Serde adapter for a bare [`Rational`] field.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        rational::format(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        rational::parse(&text).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    symbol: String,
    kind: SymbolKind,
    #[serde(with = "rational_string")]
    coeff: Rational,
}

#[derive(Serialize, Deserialize)]
struct AffineWire {
    terms: Vec<TermWire>,
    #[serde(with = "rational_string")]
    constant: Rational,
}

impl Serialize for AffineForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        AffineWire {
            terms: self
                .terms()
                .iter()
                .map(|(sym, c)| TermWire { symbol: sym.name().to_string(), kind: sym.kind(), coeff: c.clone() })
                .collect(),
            constant: self.constant_term().clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AffineForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = AffineWire::deserialize(d)?;
        Ok(AffineForm::from_parts(w.terms.into_iter().map(|t| (Symbol::new(t.symbol, t.kind), t.coeff)), w.constant))
    }
}

#[derive(Serialize, Deserialize)]
struct GammaWire {
    arg: AffineForm,
    power: i64,
}

#[derive(Serialize, Deserialize)]
struct PowerWire {
    #[serde(with = "rational_string")]
    base: Rational,
    exponent: AffineForm,
}

#[derive(Serialize, Deserialize)]
struct LinearWire {
    form: AffineForm,
    power: i64,
}

#[derive(Serialize, Deserialize)]
struct GammaExprWire {
    sign: i8,
    #[serde(with = "rational_string")]
    constant: Rational,
    gamma: Vec<GammaWire>,
    powers: Vec<PowerWire>,
    linear: Vec<LinearWire>,
}

impl Serialize for GammaExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GammaExprWire {
            sign: self.sign(),
            constant: self.constant().clone(),
            gamma: self.gammas().iter().map(|g| GammaWire { arg: g.arg.clone(), power: g.power }).collect(),
            powers: self
                .powers()
                .iter()
                .map(|p| PowerWire { base: p.base.clone(), exponent: p.exponent.clone() })
                .collect(),
            linear: self.linears().iter().map(|l| LinearWire { form: l.form.clone(), power: l.power }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GammaExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use num_traits::Signed;
        let w = GammaExprWire::deserialize(d)?;
        if w.sign != 1 && w.sign != -1 {
            return Err(D::Error::custom(format!("sign must be 1 or -1, got {}", w.sign)));
        }
        if w.gamma.iter().any(|g| g.power == 0) || w.linear.iter().any(|l| l.power == 0) {
            return Err(D::Error::custom("factor powers must be nonzero"));
        }
        if let Some(p) = w.powers.iter().find(|p| !p.base.is_positive()) {
            return Err(D::Error::custom(format!("power base must be positive, got {}", p.base)));
        }
        Ok(GammaExpr::from_parts(
            w.sign,
            w.constant,
            w.gamma.into_iter().map(|g| GammaFactor { arg: g.arg, power: g.power }).collect(),
            w.powers.into_iter().map(|p| PowerFactor { base: p.base, exponent: p.exponent }).collect(),
            w.linear.into_iter().map(|l| LinearFactor { form: l.form, power: l.power }).collect(),
        ))
    }
}
