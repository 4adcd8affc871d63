//! Exact rationals. Backed by `num_rational::BigRational`, which keeps values
//! reduced with a positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Largest integer not above `r`.
pub fn floor(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// Fractional part in `[0, 1)`.
pub fn frac(r: &Rational) -> Rational {
    r - Rational::from_integer(floor(r))
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn as_i64(r: &Rational) -> Option<i64> {
    if is_integer(r) {
        r.numer().to_i64()
    } else {
        None
    }
}

/// `base^exp` for an integer exponent; `0^negative` is an error.
pub fn pow_int(base: &Rational, exp: i64) -> Result<Rational> {
    if exp < 0 && base.is_zero() {
        return Err(Error::InvalidArgument("zero raised to a negative power".into()));
    }
    let mut result = Rational::one();
    let mut b = if exp < 0 { base.recip() } else { base.clone() };
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    Ok(result)
}

/// Natural log of |r| for nonzero r, stable for numerators and denominators
/// far outside the f64 range.
pub fn ln_abs(r: &Rational) -> f64 {
    ln_abs_bigint(r.numer()) - ln_abs_bigint(r.denom())
}

fn ln_abs_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = n.abs() >> shift;
    top.to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let magnitude = ln_abs(r).exp();
    if r.is_negative() {
        -magnitude
    } else {
        magnitude
    }
}

/// Renders `p` or `p/q`.
pub fn format(r: &Rational) -> String {
    if is_integer(r) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q`, or a terminating decimal such as `2.5`.
pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational: `{text}`"));
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, fraction)) = text.split_once('.') {
        if fraction.is_empty() || !fraction.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.trim_start().starts_with('-');
        let whole: BigInt = match whole.trim() {
            "" | "-" | "+" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let scale = BigInt::from(10).pow(fraction.len() as u32);
        let digits: BigInt = fraction.parse().map_err(|_| bad())?;
        let magnitude = Rational::from_integer(whole.abs()) + Rational::new(digits, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let n: BigInt = text.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Largest `k` with `r = root^k` for a rational `root`; returns `(root, k)`.
/// Only meaningful for `r > 0`; `1` maps to `(1, 1)`.
pub fn perfect_power(r: &Rational) -> (Rational, u32) {
    if r.is_one() || !r.is_positive() {
        return (r.clone(), 1);
    }
    let (p, q) = (r.numer(), r.denom());
    let max_k = p.bits().max(q.bits()) as u32;
    for k in (2..=max_k).rev() {
        let rp = p.nth_root(k);
        if rp.pow(k) != *p {
            continue;
        }
        let rq = q.nth_root(k);
        if rq.pow(k) == *q {
            return (Rational::new(rp, rq), k);
        }
    }
    (r.clone(), 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_and_frac_of_negatives() {
        assert_eq!(floor(&rat(-1, 2)), BigInt::from(-1));
        assert_eq!(frac(&rat(-1, 2)), rat(1, 2));
        assert_eq!(frac(&rat(7, 3)), rat(1, 3));
        assert_eq!(frac(&int(-4)), int(0));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse("5").unwrap(), int(5));
        assert_eq!(parse("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse("2.25").unwrap(), rat(9, 4));
        assert_eq!(parse("-0.5").unwrap(), rat(-1, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("1.").is_err());
    }

    #[test]
    fn perfect_powers() {
        assert_eq!(perfect_power(&int(4)), (int(2), 2));
        assert_eq!(perfect_power(&int(64)), (int(2), 6));
        assert_eq!(perfect_power(&rat(8, 27)), (rat(2, 3), 3));
        assert_eq!(perfect_power(&int(6)), (int(6), 1));
        assert_eq!(perfect_power(&rat(4, 3)), (rat(4, 3), 1));
    }

    #[test]
    fn integer_powers() {
        assert_eq!(pow_int(&rat(2, 3), 3).unwrap(), rat(8, 27));
        assert_eq!(pow_int(&rat(2, 3), -2).unwrap(), rat(9, 4));
        assert!(pow_int(&int(0), -1).is_err());
    }

    #[test]
    fn huge_values_convert() {
        let big = Rational::from_integer(BigInt::from(10).pow(400));
        let ratio = big.clone() / (big * int(3));
        assert!((to_f64(&ratio) - 1.0 / 3.0).abs() < 1e-15);
        assert!((ln_abs(&Rational::from_integer(BigInt::from(10).pow(400))) - 400.0 * 10f64.ln()).abs() < 1e-9);
    }
}
