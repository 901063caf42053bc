//! Exact rational scalars.
//!
//! RTTs, demand probabilities and every derived latency are kept as exact
//! rationals so that optimizer and oracle results can be compared with `==`.
//! Decimal input such as `0.025` is converted exactly (`1/40`).

use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number used for all latencies and probabilities.
pub type Q = Ratio<i128>;

pub fn q(numer: i128, denom: i128) -> Q {
    Q::new(numer, denom)
}

pub fn qi(value: i128) -> Q {
    Q::from_integer(value)
}

/// Parses `"3"`, `"-0.025"`, `"1.5e-3"` or `"7/40"` into an exact rational.
pub fn parse_q(text: &str) -> Result<Q> {
    let s = text.trim();
    let bad = || Error::Number(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| bad())?;
        let d: i128 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer: i128 = all_digits.parse().map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let pow = |e: u32| 10i128.checked_pow(e).ok_or_else(bad);
    let mut value = if scale >= 0 {
        Q::from_integer(numer.checked_mul(pow(scale as u32)?).ok_or_else(bad)?)
    } else {
        Q::new(numer, pow((-scale) as u32)?)
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Decimal rendering rounded half away from zero.
pub fn to_decimal(value: &Q, places: u32) -> String {
    let scale = 10i128.pow(places);
    let scaled = value * Q::from_integer(scale);
    let rounded = scaled.abs().round().to_integer();
    let sign = if value.is_negative() && rounded != 0 {
        "-"
    } else {
        ""
    };
    let int = rounded / scale;
    let frac = rounded % scale;
    if places == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac:0width$}", width = places as usize)
    }
}

pub fn to_f64(value: &Q) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// A value rendered both as an exact fraction and as a six-place decimal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactValue {
    pub exact: String,
    pub decimal: String,
}

impl From<&Q> for ExactValue {
    fn from(value: &Q) -> Self {
        ExactValue {
            exact: value.to_string(),
            decimal: to_decimal(value, 6),
        }
    }
}

impl ExactValue {
    pub fn value(&self) -> Result<Q> {
        parse_q(&self.exact)
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.decimal, self.exact)
    }
}

/// Serde adapter: a JSON number or a string such as `"7/40"`.
pub mod json {
    use super::*;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Number(serde_json::Number),
        Text(String),
    }

    fn from_raw(raw: Raw) -> Result<Q> {
        match raw {
            Raw::Number(n) => parse_q(&n.to_string()),
            Raw::Text(s) => parse_q(&s),
        }
    }

    pub fn serialize<S: Serializer>(value: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        if value.is_integer() {
            s.serialize_i64(value.to_integer() as i64)
        } else {
            s.serialize_str(&value.to_string())
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        from_raw(Raw::deserialize(d)?).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(
            values: &[Q],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            use serde::ser::SerializeSeq;
            let mut seq = s.serialize_seq(Some(values.len()))?;
            for v in values {
                seq.serialize_element(&Wrapped(v))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Q>, D::Error> {
            Vec::<Raw>::deserialize(d)?
                .into_iter()
                .map(|r| from_raw(r).map_err(serde::de::Error::custom))
                .collect()
        }
    }

    pub mod matrix {
        use super::*;

        pub fn serialize<S: Serializer>(
            rows: &[Vec<Q>],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            use serde::ser::SerializeSeq;
            let mut seq = s.serialize_seq(Some(rows.len()))?;
            for row in rows {
                let wrapped: Vec<Wrapped<'_>> = row.iter().map(Wrapped).collect();
                seq.serialize_element(&wrapped)?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Vec<Q>>, D::Error> {
            Vec::<Vec<Raw>>::deserialize(d)?
                .into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|r| from_raw(r).map_err(serde::de::Error::custom))
                        .collect()
                })
                .collect()
        }
    }

    struct Wrapped<'a>(&'a Q);

    impl Serialize for Wrapped<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
            super::json::serialize(self.0, s)
        }
    }
}

/// Exact maximum; `None` for an empty iterator.
pub fn max_q<'a>(values: impl IntoIterator<Item = &'a Q>) -> Option<Q> {
    values.into_iter().max().cloned()
}

pub fn sum_q<'a>(values: impl IntoIterator<Item = &'a Q>) -> Q {
    values.into_iter().fold(Q::zero(), |acc, v| acc + v)
}
