//! Exact rational helpers: parsing, formatting and the JSON wire form
//! `{"num": "<integer>", "den": "<integer>"}`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Shorthand for `n/d`. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `a/b`, an integer, or a finite decimal such as `-2.125`, exactly.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_decimal(num.trim()).ok_or_else(|| ParseRationalError::Malformed(s.into()))?;
        let den = parse_decimal(den.trim()).ok_or_else(|| ParseRationalError::Malformed(s.into()))?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.into()));
        }
        return Ok(num / den);
    }
    parse_decimal(s).ok_or_else(|| ParseRationalError::Malformed(s.into()))
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (negative, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (whole, frac) = match body.split_once('.') {
        Some((w, f)) => (w, f),
        None => (body, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let mantissa = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let value = Rational::new(mantissa, scale);
    Some(if negative { -value } else { value })
}

/// `n` for integers, `n/d` otherwise.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn min_rational<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn max_rational<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn in_closed_unit(x: &Rational) -> bool {
    !x.is_negative() && *x <= Rational::one()
}

#[derive(serde::Serialize, serde::Deserialize)]
struct Wire {
    num: String,
    den: String,
}

impl Wire {
    fn from_rational(x: &Rational) -> Self {
        Wire { num: x.numer().to_string(), den: x.denom().to_string() }
    }

    fn into_rational<E: serde::de::Error>(self) -> Result<Rational, E> {
        let num = BigInt::from_str(&self.num).map_err(|_| E::custom(format!("bad numerator `{}`", self.num)))?;
        let den = BigInt::from_str(&self.den).map_err(|_| E::custom(format!("bad denominator `{}`", self.den)))?;
        if den.is_zero() {
            return Err(E::custom("zero denominator"));
        }
        Ok(Rational::new(num, den))
    }
}

/// `#[serde(with = "crate::rational::json")]`
pub mod json {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        Wire::from_rational(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        Wire::deserialize(d)?.into_rational()
    }
}

/// `#[serde(with = "crate::rational::json_opt")]`
pub mod json_opt {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref().map(Wire::from_rational).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<Wire>::deserialize(d)?.map(Wire::into_rational).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("7/3").unwrap(), ratio(7, 3));
        assert_eq!(parse_rational("2").unwrap(), int(2));
        assert_eq!(parse_rational("2.125").unwrap(), ratio(17, 8));
        assert_eq!(parse_rational("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational(".25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("1.5/3").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational(" 13/6 ").unwrap(), ratio(13, 6));
    }

    #[test]
    fn rejects_garbage() {
        assert_eq!(parse_rational(""), Err(ParseRationalError::Empty));
        assert!(matches!(parse_rational("1/0"), Err(ParseRationalError::ZeroDenominator(_))));
        for bad in ["abc", "1e3", "1..2", ".", "-", "1/", "/2", "2/3/4", "nan", "inf"] {
            assert!(parse_rational(bad).is_err(), "{bad} should be rejected");
        }
    }

    #[test]
    fn formats_reduced() {
        assert_eq!(format_rational(&ratio(18, 8)), "9/4");
        assert_eq!(format_rational(&ratio(6, 3)), "2");
        assert_eq!(format_rational(&ratio(-1, 6)), "-1/6");
    }

    #[test]
    fn wire_form() {
        #[derive(serde::Serialize, serde::Deserialize)]
        struct Holder {
            #[serde(with = "json")]
            x: Rational,
            #[serde(with = "json_opt")]
            y: Option<Rational>,
        }
        let h = Holder { x: ratio(-9, 4), y: None };
        let text = serde_json::to_string(&h).unwrap();
        assert_eq!(text, r#"{"x":{"num":"-9","den":"4"},"y":null}"#);
        let back: Holder = serde_json::from_str(r#"{"x":{"num":"6","den":"-4"},"y":{"num":"1","den":"3"}}"#).unwrap();
        assert_eq!(back.x, ratio(-3, 2));
        assert_eq!(back.y, Some(ratio(1, 3)));
        assert!(serde_json::from_str::<Holder>(r#"{"x":{"num":"1","den":"0"},"y":null}"#).is_err());
    }
}
