//! Exact angle and length values.
//!
//! Angles are rationals in units of π. Lengths are rationals optionally
//! multiplied by √2, which is enough for unit squares cut along a diagonal
//! and for the √2-rescaling used when glueing a product factor.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A rational multiple of π.
pub type Angle = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {what} from {text:?}")]
pub struct ParseValueError {
    pub what: &'static str,
    pub text: String,
}

fn parse_ratio(s: &str, what: &'static str) -> Result<Ratio<i64>, ParseValueError> {
    let err = || ParseValueError {
        what,
        text: s.to_string(),
    };
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| err())?;
            let d: i64 = d.trim().parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            Ok(Ratio::new(n, d))
        }
        None => Ok(Ratio::from_integer(s.parse().map_err(|_| err())?)),
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn format_ratio(r: &Ratio<i64>) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Formats an angle as `p/q pi`.
pub fn format_angle(a: &Angle) -> String {
    format!("{} pi", format_ratio(a))
}

/// Parses `p/q pi` (the `pi` suffix is optional).
pub fn parse_angle(s: &str) -> Result<Angle, ParseValueError> {
    let t = s.trim();
    let t = t.strip_suffix("pi").unwrap_or(t);
    parse_ratio(t, "angle").map_err(|_| ParseValueError {
        what: "angle",
        text: s.to_string(),
    })
}

/// Least common multiple of the denominators, used to turn angles into
/// integer weights.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Angle>) -> i64 {
    values
        .into_iter()
        .fold(1i64, |acc, v| acc.lcm(v.denom()))
}

/// Edge length `coeff · √2^e` with `e ∈ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Length {
    coeff: Ratio<i64>,
    root2: bool,
}

impl Length {
    pub fn rational(coeff: Ratio<i64>) -> Self {
        Length {
            coeff,
            root2: false,
        }
    }

    pub fn with_root2(coeff: Ratio<i64>) -> Self {
        Length { coeff, root2: true }
    }

    pub fn one() -> Self {
        Self::rational(Ratio::one())
    }

    pub fn sqrt2() -> Self {
        Self::with_root2(Ratio::one())
    }

    pub fn coeff(&self) -> Ratio<i64> {
        self.coeff
    }

    pub fn has_root2(&self) -> bool {
        self.root2
    }

    pub fn is_positive(&self) -> bool {
        self.coeff.is_positive()
    }

    pub fn is_one(&self) -> bool {
        !self.root2 && self.coeff.is_one()
    }

    /// Multiplies by √2.
    pub fn times_sqrt2(&self) -> Self {
        if self.root2 {
            Self::rational(self.coeff * 2)
        } else {
            Self::with_root2(self.coeff)
        }
    }

    /// Square of the length, always rational.
    pub fn squared(&self) -> Ratio<i64> {
        let sq = self.coeff * self.coeff;
        if self.root2 {
            sq * 2
        } else {
            sq
        }
    }
}

impl PartialOrd for Length {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Length {
    fn cmp(&self, other: &Self) -> Ordering {
        let sign = |l: &Length| l.coeff.signum();
        match sign(self).cmp(&sign(other)) {
            Ordering::Equal => {}
            o => return o,
        }
        let by_square = self.squared().cmp(&other.squared());
        if self.coeff.is_negative() {
            by_square.reverse()
        } else {
            by_square
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.root2, self.coeff.is_one()) {
            (false, _) => write!(f, "{}", format_ratio(&self.coeff)),
            (true, true) => write!(f, "sqrt2"),
            (true, false) => write!(f, "{}*sqrt2", format_ratio(&self.coeff)),
        }
    }
}

impl FromStr for Length {
    type Err = ParseValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseValueError {
            what: "length",
            text: s.to_string(),
        };
        let t = s.trim();
        if t == "sqrt2" {
            return Ok(Length::sqrt2());
        }
        if let Some(c) = t.strip_suffix("*sqrt2") {
            return parse_ratio(c, "length")
                .map(Length::with_root2)
                .map_err(|_| err());
        }
        parse_ratio(t, "length")
            .map(Length::rational)
            .map_err(|_| err())
    }
}

impl Serialize for Length {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Length {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde helpers writing angles as `p/q pi` strings.
pub mod serde_angle {
    use super::*;

    pub fn serialize<S: Serializer>(a: &Angle, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_angle(a))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Angle, D::Error> {
        let s = String::deserialize(d)?;
        parse_angle(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde helpers for optional angles (`null` for infinity / absent).
pub mod serde_angle_opt {
    use super::*;

    pub fn serialize<S: Serializer>(a: &Option<Angle>, s: S) -> Result<S::Ok, S::Error> {
        match a {
            Some(a) => s.serialize_some(&format_angle(a)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Angle>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| parse_angle(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_text_round_trip() {
        for s in ["1", "1/2", "sqrt2", "3/2*sqrt2", "7"] {
            let l: Length = s.parse().unwrap();
            assert_eq!(l.to_string(), s);
        }
    }

    #[test]
    fn root2_scaling() {
        assert_eq!(Length::one().times_sqrt2(), Length::sqrt2());
        assert_eq!(Length::sqrt2().times_sqrt2(), Length::rational(Ratio::from_integer(2)));
        assert!(Length::sqrt2() > Length::one());
        assert!(Length::sqrt2() < Length::rational(Ratio::new(3, 2)));
    }

    #[test]
    fn angle_text() {
        assert_eq!(parse_angle("1/3 pi").unwrap(), Ratio::new(1, 3));
        assert_eq!(format_angle(&Ratio::new(1, 2)), "1/2 pi");
        assert_eq!(format_angle(&Ratio::from_integer(1)), "1 pi");
        assert!(parse_angle("x pi").is_err());
    }
}
