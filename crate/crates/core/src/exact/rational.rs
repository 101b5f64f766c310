//! Arbitrary-precision rationals.
//!
//! `ExactRational` is `num_rational::BigRational`, which already keeps the
//! denominator positive and the fraction reduced. This module adds the
//! text formats used by the ODE and eigenpair files: `"p"`, `"p/q"` and
//! exact decimal expansions such as `"-1.25e-3"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type ExactRational = BigRational;

pub fn int(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> ExactRational {
    assert!(q != 0, "zero denominator");
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p"`, `"p/q"` or a decimal literal with optional exponent.
/// Decimals are converted exactly: `"0.1"` is `1/10`.
pub fn parse(text: &str) -> Result<ExactRational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {text:?}")))?;
        let q: BigInt = q.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {text:?}")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    parse_decimal(s).ok_or_else(|| Error::Parse(format!("not a rational literal: {text:?}")))
}

fn parse_decimal(s: &str) -> Option<ExactRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all: String = [int_part, frac_part].concat();
    let mut value = BigInt::parse_bytes(all.as_bytes(), 10)?;
    if negative {
        value = -value;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    Some(if scale >= 0 {
        BigRational::from_integer(value * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(value, num_traits::pow(ten, (-scale) as usize))
    })
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format(r: &ExactRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &ExactRational) -> f64 {
    r.to_f64().unwrap_or_else(|| if r.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// Exact rational value of a finite double.
pub fn from_f64(v: f64) -> Result<ExactRational> {
    BigRational::from_float(v).ok_or_else(|| Error::Parse(format!("non-finite value {v}")))
}

/// Serde adapter: rationals travel as `"p/q"` strings, and integer or
/// decimal JSON numbers are accepted on input.
pub mod serde_text {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &ExactRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<ExactRational, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        from_json(&v).map_err(de::Error::custom)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<ExactRational> {
        match v {
            serde_json::Value::String(s) => parse(s),
            // with arbitrary_precision the number keeps its literal text
            serde_json::Value::Number(n) => parse(&n.to_string()),
            other => Err(Error::Parse(format!("expected a number or \"p/q\" string, got {other}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_and_integer() {
        assert_eq!(parse("-2/3").unwrap(), ratio(-2, 3));
        assert_eq!(parse("4/6").unwrap(), ratio(2, 3));
        assert_eq!(parse("7").unwrap(), int(7));
        assert_eq!(parse(" -12 ").unwrap(), int(-12));
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse("0.1").unwrap(), ratio(1, 10));
        assert_eq!(parse("-1.25e-3").unwrap(), ratio(-1, 800));
        assert_eq!(parse("2.5E2").unwrap(), int(250));
        assert_eq!(parse(".5").unwrap(), ratio(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("").is_err());
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("1.2.3").is_err());
        assert!(parse("-").is_err());
    }

    #[test]
    fn canonical_text_round_trips() {
        for s in ["0", "-5", "5/3", "-7/12"] {
            assert_eq!(format(&parse(s).unwrap()), s);
        }
        assert_eq!(format(&parse("6/-4").unwrap()), "-3/2");
    }

    #[test]
    fn float_conversion_is_exact() {
        let r = from_f64(0.1).unwrap();
        assert_ne!(r, ratio(1, 10));
        assert_eq!(to_f64(&r), 0.1);
    }
}
