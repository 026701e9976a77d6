//! Closed real intervals with the Minkowski arithmetic, inclusion order and
//! Hausdorff metric used by every engine in the crate.
//!
//! Arithmetic uses round-to-nearest. Inclusion tests take an explicit
//! tolerance instead of relying on outward rounding.

use std::fmt;
use std::ops::Add;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` with finite bounds and `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// Degenerate interval `[v, v]`. Panics on non-finite input.
    pub fn point(v: f64) -> Self {
        assert!(v.is_finite(), "point interval needs a finite value, got {v}");
        Interval { lo: v, hi: v }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Member of the nonnegative half `lo >= 0`, which is how `R_I^+` is read.
    pub fn is_nonnegative(&self) -> bool {
        self.lo >= 0.0
    }

    pub fn contains_value(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    /// `alpha * X` for `alpha >= 0`.
    pub fn scale(&self, alpha: f64) -> Result<Self> {
        if alpha < 0.0 || !alpha.is_finite() {
            return Err(Error::NegativeScalar(alpha));
        }
        Ok(Interval { lo: alpha * self.lo, hi: alpha * self.hi })
    }

    /// Product of two nonnegative intervals, `[X.lo*Y.lo, X.hi*Y.hi]`.
    pub fn mul_nonneg(&self, other: &Interval) -> Result<Self> {
        for operand in [self, other] {
            if operand.lo < 0.0 {
                return Err(Error::NegativeOperand(operand.to_string()));
            }
        }
        Ok(Interval { lo: self.lo * other.lo, hi: self.hi * other.hi })
    }

    /// `self ⊇ other` up to `tol` on each endpoint.
    pub fn includes(&self, other: &Interval, tol: f64) -> bool {
        self.lo <= other.lo + tol && self.hi >= other.hi - tol
    }

    /// How far `self ⊇ other` is from holding, per endpoint; zero when it holds.
    pub fn inclusion_defect(&self, other: &Interval) -> (f64, f64) {
        ((self.lo - other.lo).max(0.0), (other.hi - self.hi).max(0.0))
    }

    pub fn hausdorff(&self, other: &Interval) -> f64 {
        (self.lo - other.lo).abs().max((self.hi - other.hi).abs())
    }

    pub(crate) fn from_bounds_unchecked(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi || lo.is_nan() || hi.is_nan());
        Interval { lo, hi }
    }
}

impl Add for Interval {
    type Output = Interval;

    fn add(self, rhs: Interval) -> Interval {
        Interval { lo: self.lo + rhs.lo, hi: self.hi + rhs.hi }
    }
}

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |acc, x| acc + x)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut tup = serializer.serialize_tuple(2)?;
        tup.serialize_element(&self.lo)?;
        tup.serialize_element(&self.hi)?;
        tup.end()
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct PairVisitor;

        impl<'de> Visitor<'de> for PairVisitor {
            type Value = Interval;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a two-element array [lo, hi]")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Interval, A::Error> {
                let lo: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let hi: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<f64>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Interval::new(lo, hi).map_err(de::Error::custom)
            }
        }

        deserializer.deserialize_tuple(2, PairVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn construction() {
        assert_eq!(iv(1.0, 3.0).lo(), 1.0);
        assert!(iv(2.0, 2.0).is_point());
        assert!(matches!(Interval::new(3.0, 1.0), Err(Error::InvalidInterval { .. })));
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn addition() {
        assert_eq!(iv(1.0, 2.0) + iv(3.0, 5.0), iv(4.0, 7.0));
        assert_eq!(iv(0.0, 0.0) + iv(3.0, 5.0), iv(3.0, 5.0));
        assert_eq!(iv(1.0, 4.0) + iv(2.0, 8.0), iv(3.0, 12.0));
    }

    #[test]
    fn scaling() {
        assert_eq!(iv(1.0, 3.0).scale(0.5).unwrap(), iv(0.5, 1.5));
        assert_eq!(iv(1.0, 3.0).scale(0.0).unwrap(), iv(0.0, 0.0));
        assert_eq!(iv(3.0, 12.0).scale(0.25).unwrap(), iv(0.75, 3.0));
        assert_eq!(iv(1.0, 3.0).scale(-1.0), Err(Error::NegativeScalar(-1.0)));
    }

    #[test]
    fn nonnegative_products() {
        assert_eq!(iv(1.0, 4.0).mul_nonneg(&iv(2.0, 8.0)).unwrap(), iv(2.0, 32.0));
        assert_eq!(iv(0.0, 0.0).mul_nonneg(&iv(5.0, 9.0)).unwrap(), iv(0.0, 0.0));
        assert_eq!(iv(2.0, 8.0).mul_nonneg(&iv(2.0, 8.0)).unwrap(), iv(4.0, 64.0));
        assert!(matches!(iv(-1.0, 2.0).mul_nonneg(&iv(1.0, 1.0)), Err(Error::NegativeOperand(_))));
    }

    #[test]
    fn inclusion() {
        assert!(iv(2.0, 11.0).includes(&iv(7.0 / 3.0, 32.0 / 3.0), 0.0));
        assert!(iv(0.75, 3.0).includes(&iv(0.75, 3.0), 0.0));
        assert!(!iv(1.0, 2.0).includes(&iv(0.0, 3.0), 0.0));
        assert!(iv(1.0, 2.0).includes(&iv(0.9, 2.05), 0.1));
        assert_eq!(iv(7.0 / 9.0, 12.0).inclusion_defect(&iv(6.0 / 9.0, 10.0)).1, 0.0);
    }

    #[test]
    fn hausdorff_distance() {
        assert_eq!(iv(1.0, 3.0).hausdorff(&iv(2.0, 5.0)), 2.0);
        assert_eq!(iv(1.0, 3.0).hausdorff(&iv(1.0, 3.0)), 0.0);
        // upper endpoint difference enters with absolute value
        assert_eq!(iv(0.0, 5.0).hausdorff(&iv(0.0, 1.0)), 4.0);
        assert_eq!(iv(0.0, 1.0).hausdorff(&iv(0.0, 5.0)), 4.0);
        assert!(Interval::new(4.0, 1.5).is_err());
    }

    #[test]
    fn serde_pair() {
        let s = serde_json::to_string(&iv(0.75, 3.0)).unwrap();
        assert_eq!(s, "[0.75,3.0]");
        let back: Interval = serde_json::from_str(&s).unwrap();
        assert_eq!(back, iv(0.75, 3.0));
        assert!(serde_json::from_str::<Interval>("[3.0, 1.0]").is_err());
        assert!(serde_json::from_str::<Interval>("[1.0]").is_err());
    }
}
