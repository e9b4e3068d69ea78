//! Extended reals `ℝ ∪ {+∞}` for rate functions and cumulant generating
//! functions.
//!
//! `+∞` is absorbing under addition and compares above every finite value.
//! Constructing from a NaN is a logic error and trips a debug assertion; in
//! release builds it is mapped to `+∞` so that no NaN leaves the library.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};

use serde::{Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    PosInf,
}

impl ExtendedReal {
    pub const ZERO: ExtendedReal = ExtendedReal::Finite(0.0);

    pub fn from_f64(v: f64) -> Self {
        debug_assert!(!v.is_nan(), "NaN reached ExtendedReal");
        if v.is_nan() || v == f64::INFINITY {
            ExtendedReal::PosInf
        } else {
            // `+ 0.0` turns -0 into 0.
            ExtendedReal::Finite(v + 0.0)
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedReal::PosInf)
    }

    /// Finite payload, if any.
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::PosInf => None,
        }
    }

    /// Lossless view as an `f64` (`+∞` becomes `f64::INFINITY`).
    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::Finite(v) => v,
            ExtendedReal::PosInf => f64::INFINITY,
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// `|a - b|`, with two infinities considered equal (distance 0) and a
    /// finite/infinite pair infinitely far apart.
    pub fn distance(self, other: Self) -> f64 {
        match (self, other) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => (a - b).abs(),
            (ExtendedReal::PosInf, ExtendedReal::PosInf) => 0.0,
            _ => f64::INFINITY,
        }
    }
}

impl Default for ExtendedReal {
    fn default() -> Self {
        ExtendedReal::ZERO
    }
}

impl From<f64> for ExtendedReal {
    fn from(v: f64) -> Self {
        ExtendedReal::from_f64(v)
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use ExtendedReal::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.partial_cmp(b),
            (Finite(_), PosInf) => Some(Ordering::Less),
            (PosInf, Finite(_)) => Some(Ordering::Greater),
            (PosInf, PosInf) => Some(Ordering::Equal),
        }
    }
}

impl Add for ExtendedReal {
    type Output = ExtendedReal;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::from_f64(a + b),
            _ => ExtendedReal::PosInf,
        }
    }
}

impl Add<f64> for ExtendedReal {
    type Output = ExtendedReal;
    fn add(self, rhs: f64) -> Self {
        self + ExtendedReal::from_f64(rhs)
    }
}

impl Sub<f64> for ExtendedReal {
    type Output = ExtendedReal;
    fn sub(self, rhs: f64) -> Self {
        self + ExtendedReal::from_f64(-rhs)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // `{}` on f64 prints the shortest string that round-trips.
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::PosInf => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(v) => s.serialize_f64(*v + 0.0),
            ExtendedReal::PosInf => s.serialize_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_is_absorbing_and_largest() {
        let inf = ExtendedReal::PosInf;
        let one = ExtendedReal::Finite(1.0);
        assert_eq!(inf + one, inf);
        assert_eq!(one + 2.0, ExtendedReal::Finite(3.0));
        assert!(inf > ExtendedReal::Finite(f64::MAX));
        assert_eq!(one.min(inf), one);
        assert_eq!(one.max(inf), inf);
    }

    #[test]
    fn from_f64_maps_infinity() {
        assert_eq!(ExtendedReal::from(f64::INFINITY), ExtendedReal::PosInf);
        assert_eq!(ExtendedReal::from(-2.5), ExtendedReal::Finite(-2.5));
    }

    #[test]
    fn display_tokens() {
        assert_eq!(ExtendedReal::PosInf.to_string(), "inf");
        assert_eq!(ExtendedReal::Finite(0.1).to_string(), "0.1");
        assert_eq!(ExtendedReal::Finite(1.0).to_string(), "1");
    }

    #[test]
    fn distance_treats_infinities_as_equal() {
        assert_eq!(ExtendedReal::PosInf.distance(ExtendedReal::PosInf), 0.0);
        assert!(ExtendedReal::PosInf.distance(ExtendedReal::ZERO).is_infinite());
        assert_eq!(ExtendedReal::Finite(1.5).distance(ExtendedReal::Finite(1.0)), 0.5);
    }
}
