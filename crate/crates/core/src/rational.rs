//! Arbitrary-precision numeric aliases and the `"p/q"` interchange format.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};
use std::str::FromStr;
use thiserror::Error;

/// Unsigned arbitrary-precision integer.
pub type Nat = BigUint;
/// Signed arbitrary-precision integer.
pub type Int = BigInt;
/// Exact rational number.
pub type Rat = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRatError {
    #[error("empty numeric string")]
    Empty,
    #[error("invalid integer literal {0:?}")]
    BadInt(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Parses `"p/q"` or a plain decimal integer `"p"` into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRatError::Empty);
    }
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), Some(q.trim())),
        None => (s, None),
    };
    let p = Int::from_str(num).map_err(|_| ParseRatError::BadInt(s.to_string()))?;
    let q = match den {
        Some(q) => Int::from_str(q).map_err(|_| ParseRatError::BadInt(s.to_string()))?,
        None => Int::one(),
    };
    if q.is_zero() {
        return Err(ParseRatError::ZeroDenominator(s.to_string()));
    }
    Ok(Rat::new(p, q))
}

/// Renders a rational as `"p/q"`, or `"p"` when the denominator is 1.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders the exact fraction `num/den` without reducing it first.
///
/// Used where numerator and denominator are huge and a gcd would cost more
/// than the string is worth; the value is exact either way.
pub fn format_fraction_raw(num: &Int, den: &Int) -> String {
    if den.is_one() {
        num.to_string()
    } else {
        format!("{}/{}", num, den)
    }
}

/// `|r|` as an exact rational.
pub fn rat_abs(r: &Rat) -> Rat {
    if r.is_negative() {
        -r.clone()
    } else {
        r.clone()
    }
}

/// JSON codec for `Nat` values: a plain number while the value fits in
/// `u64`, a decimal string beyond that.
pub mod nat_json {
    use super::*;
    use serde::de::Error as _;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum NumOrStr {
        Num(u64),
        Str(String),
    }

    pub fn serialize<S: Serializer>(value: &Nat, ser: S) -> Result<S::Ok, S::Error> {
        match u64::try_from(value) {
            Ok(small) => ser.serialize_u64(small),
            Err(_) => ser.serialize_str(&value.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Nat, D::Error> {
        match NumOrStr::deserialize(de)? {
            NumOrStr::Num(n) => Ok(Nat::from(n)),
            NumOrStr::Str(s) => {
                Nat::from_str(s.trim()).map_err(|_| D::Error::custom(format!("bad integer {s:?}")))
            }
        }
    }

    pub(crate) fn to_value(value: &Nat) -> serde_json::Value {
        match u64::try_from(value) {
            Ok(small) => serde_json::Value::from(small),
            Err(_) => serde_json::Value::from(value.to_string()),
        }
    }

    pub(crate) fn from_value(v: &serde_json::Value) -> Option<Nat> {
        match v {
            serde_json::Value::Number(n) => n.as_u64().map(Nat::from),
            serde_json::Value::String(s) => Nat::from_str(s.trim()).ok(),
            _ => None,
        }
    }
}

/// JSON codec for `Vec<Nat>`, element-wise [`nat_json`].
pub mod nat_vec_json {
    use super::*;
    use serde::de::Error as _;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(values: &[Nat], ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&nat_json::to_value(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Nat>, D::Error> {
        let raw = Vec::<serde_json::Value>::deserialize(de)?;
        raw.iter()
            .map(|v| nat_json::from_value(v).ok_or_else(|| D::Error::custom("bad integer entry")))
            .collect()
    }
}

/// JSON codec for `Vec<Vec<Nat>>`.
pub mod nat_vec_vec_json {
    use super::*;
    use serde::de::Error as _;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(values: &[Vec<Nat>], ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(values.len()))?;
        for row in values {
            let row: Vec<serde_json::Value> = row.iter().map(nat_json::to_value).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Vec<Nat>>, D::Error> {
        let raw = Vec::<Vec<serde_json::Value>>::deserialize(de)?;
        raw.iter()
            .map(|row| {
                row.iter()
                    .map(|v| {
                        nat_json::from_value(v).ok_or_else(|| D::Error::custom("bad integer entry"))
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        let r = parse_rat("3/4").unwrap();
        assert_eq!(format_rat(&r), "3/4");
        assert_eq!(format_rat(&parse_rat("7").unwrap()), "7");
        assert_eq!(format_rat(&parse_rat("-6/4").unwrap()), "-3/2");
        assert_eq!(format_rat(&parse_rat("0/9").unwrap()), "0");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_rat("").is_err());
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x/2").is_err());
    }

    #[test]
    fn nat_json_switches_to_strings_past_u64() {
        let small = Nat::from(17u32);
        assert_eq!(nat_json::to_value(&small), serde_json::json!(17));
        let big = Nat::from(u64::MAX) + 1u32;
        assert_eq!(
            nat_json::to_value(&big),
            serde_json::json!("18446744073709551616")
        );
        assert_eq!(nat_json::from_value(&serde_json::json!(17)).unwrap(), small);
        assert_eq!(
            nat_json::from_value(&serde_json::json!("18446744073709551616")).unwrap(),
            big
        );
    }
}
