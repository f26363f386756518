//! Exact rational parsing and printing for symbolic systems.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact value of a finite double.
pub fn from_f64(v: f64) -> Result<Rational> {
    Rational::from_float(v).ok_or_else(|| Error::Domain(format!("{v} is not a finite number")))
}

pub fn to_f64(v: &Rational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"3"`, `"-1/2"`, `"0.25"`, `"1e-3"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Validation(format!("cannot parse {s:?} as a rational number"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Validation(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse::<BigInt>().map_err(|_| bad())? / 10;
    let shift = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Rational::from_integer(all);
    if shift >= 0 {
        r *= Rational::from_integer(num::pow(ten, shift as usize));
    } else {
        r /= Rational::from_integer(num::pow(ten, (-shift) as usize));
    }
    Ok(if neg { -r } else { r })
}

pub fn from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        other => Err(Error::Validation(format!("expected a number, got {other}"))),
    }
}

/// Terminating decimal expansion with at most 15 significant digits, if any.
fn short_decimal(v: &Rational) -> Option<String> {
    let mut den = v.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let mut places = 0usize;
    let (mut n2, mut n5) = (0usize, 0usize);
    while (&den % &two).is_zero() {
        den /= &two;
        n2 += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        n5 += 1;
    }
    if !den.is_one() {
        return None;
    }
    places = places.max(n2).max(n5);
    let scaled = v * Rational::from_integer(num::pow(BigInt::from(10), places));
    let digits = scaled.to_integer().abs().to_string();
    if digits.trim_start_matches('0').len() > 15 {
        return None;
    }
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (i, f) = padded.split_at(padded.len() - places);
    let sign = if v.is_negative() { "-" } else { "" };
    Some(format!("{sign}{i}.{f}"))
}

/// Integers and short decimals become JSON numbers; anything else `"p/q"`.
pub fn to_json(v: &Rational) -> Value {
    if v.is_integer() {
        if let Some(i) = v.to_integer().to_i64() {
            return Value::from(i);
        }
        return Value::String(v.to_integer().to_string());
    }
    if let Some(d) = short_decimal(v) {
        if let Ok(f) = d.parse::<f64>() {
            if let Some(n) = serde_json::Number::from_f64(f) {
                if parse_rational(&n.to_string()).ok().as_ref() == Some(v) {
                    return Value::Number(n);
                }
            }
        }
    }
    Value::String(format!("{}/{}", v.numer(), v.denom()))
}
