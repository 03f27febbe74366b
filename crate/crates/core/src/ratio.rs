//! Exact rationals: parsing, serde shapes, and a few comparison helpers.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{parameter, Result};

/// Parses `"p/q"` or an integer into an exact rational. Decimal floats are
/// rejected so that thresholds stay exact.
pub fn parse_rational(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let bad = || {
        parameter::<Rational64>(format!(
            "invalid rational {s:?}: expected an integer or p/q (floats are not accepted)"
        ))
    };
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim().parse::<i64>(), q.trim().parse::<i64>()),
        None => (s.parse::<i64>(), Ok(1)),
    };
    match (num, den) {
        (Ok(_), Ok(0)) => parameter(format!("invalid rational {s:?}: zero denominator")),
        (Ok(p), Ok(q)) => Ok(Rational64::new(p, q)),
        _ => bad(),
    }
}

pub fn to_big(r: &Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub fn big_from_ints(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// `p/q` formatting that prints integers without a denominator.
pub fn fmt_rational64(r: &Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn fmt_big(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal string of an integer, shortened to `d.ddddde+N` past 40 digits.
pub fn abbrev_int(i: &BigInt) -> String {
    let s = i.to_string();
    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", s.as_str()),
    };
    if digits.len() <= 40 {
        return s;
    }
    format!("{sign}{}.{}e+{}", &digits[..1], &digits[1..6], digits.len() - 1)
}

/// Like [`fmt_big`] but with long numerators and denominators shortened.
pub fn abbrev_big(r: &BigRational) -> String {
    if r.is_integer() {
        abbrev_int(r.numer())
    } else {
        format!("{}/{}", abbrev_int(r.numer()), abbrev_int(r.denom()))
    }
}

/// `floor(r)` for a small rational.
pub fn floor64(r: &Rational64) -> i64 {
    r.floor().to_integer()
}

/// Exact rational as `{"num": "...", "den": "..."}` with decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRepr {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RationalRepr {
    fn from(r: &BigRational) -> Self {
        RationalRepr {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

impl From<&Rational64> for RationalRepr {
    fn from(r: &Rational64) -> Self {
        RationalRepr {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

impl RationalRepr {
    pub fn to_big(&self) -> Option<BigRational> {
        let num = self.num.parse::<BigInt>().ok()?;
        let den = self.den.parse::<BigInt>().ok()?;
        if den.is_zero() {
            return None;
        }
        Some(BigRational::new(num, den))
    }
}

/// Serde adapter storing a [`Rational64`] as its `"p/q"` string.
pub mod serde_r64 {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational64(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational64, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(
            r: &Option<Rational64>,
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&fmt_rational64(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Option<Rational64>, D::Error> {
            match Option::<String>::deserialize(d)? {
                Some(s) => parse_rational(&s).map(Some).map_err(serde::de::Error::custom),
                None => Ok(None),
            }
        }
    }
}

/// Serde adapter storing a [`BigUint`](num_bigint::BigUint) as a decimal string.
pub mod serde_biguint {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

/// Serde adapter for a list of [`Rational64`] as `"p/q"` strings.
pub mod serde_r64_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational64], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(fmt_rational64))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational64>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}
