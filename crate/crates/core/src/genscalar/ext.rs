use std::cmp::Ordering;
use std::fmt;

use num_traits::{ToPrimitive, Zero};

use super::Rational;

/// An element of `(-∞, +∞]`: the codomain of every valuation in the crate.
///
/// Finite values are exact rationals. `+∞` is its own variant so that no
/// arithmetic ever runs on a floating sentinel.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtReal {
    Finite(Rational),
    Infinity,
}

impl ExtReal {
    pub fn finite(value: Rational) -> Self {
        ExtReal::Finite(value)
    }

    pub fn from_integer(value: i64) -> Self {
        ExtReal::Finite(Rational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        ExtReal::Finite(Rational::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtReal::Infinity)
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinity => None,
        }
    }

    /// `None` for `+∞`.
    pub fn to_f64(&self) -> Option<f64> {
        self.as_finite().map(|v| v.to_f64().unwrap_or(f64::NAN))
    }

    /// `e^{-self}` with `e^{-∞} = 0`.
    pub fn abs_e(&self) -> f64 {
        match self {
            ExtReal::Finite(v) => (-v.to_f64().unwrap_or(f64::NAN)).exp(),
            ExtReal::Infinity => 0.0,
        }
    }

    /// Adds a finite shift; `+∞` absorbs it.
    pub fn shift(&self, by: &Rational) -> Self {
        match self {
            ExtReal::Finite(v) => ExtReal::Finite(v + by),
            ExtReal::Infinity => ExtReal::Infinity,
        }
    }

    pub fn add(&self, other: &ExtReal) -> Self {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            _ => ExtReal::Infinity,
        }
    }

    pub fn min_of<'a, I: IntoIterator<Item = &'a ExtReal>>(values: I) -> ExtReal {
        values
            .into_iter()
            .min()
            .cloned()
            .unwrap_or(ExtReal::Infinity)
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.cmp(b),
            (ExtReal::Finite(_), ExtReal::Infinity) => Ordering::Less,
            (ExtReal::Infinity, ExtReal::Finite(_)) => Ordering::Greater,
            (ExtReal::Infinity, ExtReal::Infinity) => Ordering::Equal,
        }
    }
}

impl From<Rational> for ExtReal {
    fn from(value: Rational) -> Self {
        ExtReal::Finite(value)
    }
}

impl std::str::FromStr for ExtReal {
    type Err = num_rational::ParseRatioError;

    /// Parses `inf` or a rational `p` / `p/q`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" => Ok(ExtReal::Infinity),
            other => other.parse().map(ExtReal::Finite),
        }
    }
}

impl serde::Serialize for ExtReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::Infinity => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_is_top() {
        let two = ExtReal::from_integer(2);
        assert!(two < ExtReal::Infinity);
        assert_eq!(ExtReal::min_of([&ExtReal::Infinity, &two]), two);
        assert_eq!(ExtReal::min_of(std::iter::empty()), ExtReal::Infinity);
        assert_eq!(ExtReal::Infinity.abs_e(), 0.0);
        assert_eq!(ExtReal::zero().abs_e(), 1.0);
        assert_eq!(two.add(&ExtReal::Infinity), ExtReal::Infinity);
        assert_eq!("inf".parse::<ExtReal>().unwrap(), ExtReal::Infinity);
        assert_eq!("-3/6".parse::<ExtReal>().unwrap().to_string(), "-1/2");
        assert!("1/0".parse::<ExtReal>().is_err());
    }
}
