//! Exact rationals and their `"p/q"` string form.

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Always emits `p/q`, including integers (`1/1`).
pub fn format(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `p/q` or a bare integer.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not a rational: `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Label form used for point ids: `3`, `1/2`.
pub fn label(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format(q)
    }
}

/// Serde wrapper serializing a rational as a `"p/q"` string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalString(pub Rational);

impl fmt::Display for RationalString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format(&self.0))
    }
}

impl FromStr for RationalString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse(s).map(RationalString)
    }
}

impl From<Rational> for RationalString {
    fn from(q: Rational) -> Self {
        RationalString(q)
    }
}

impl Serialize for RationalString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(&self.0))
    }
}

impl<'de> Deserialize<'de> for RationalString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map(RationalString).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse(" 3 ").unwrap(), rat(3, 1));
        assert_eq!(format(&rat(3, 1)), "3/1");
        assert_eq!(label(&rat(6, 8)), "3/4");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn serde_string_form() {
        let v = serde_json::to_string(&RationalString(rat(1, 8))).unwrap();
        assert_eq!(v, "\"1/8\"");
        let back: RationalString = serde_json::from_str("\"2/16\"").unwrap();
        assert_eq!(back.0, rat(1, 8));
    }
}
