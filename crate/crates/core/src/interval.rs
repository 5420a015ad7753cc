//! Intervals of the real line with independently open or closed ends.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::extreal::{ExtReal, Rational};
use crate::Error;

/// One end of an interval. Infinite ends are always open.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EndPoint {
    pub value: ExtReal,
    pub closed: bool,
}

impl EndPoint {
    pub fn closed(x: Rational) -> Self {
        EndPoint { value: ExtReal::Finite(x), closed: true }
    }

    pub fn open(x: Rational) -> Self {
        EndPoint { value: ExtReal::Finite(x), closed: false }
    }

    pub fn neg_inf() -> Self {
        EndPoint { value: ExtReal::NegInf, closed: false }
    }

    pub fn pos_inf() -> Self {
        EndPoint { value: ExtReal::PosInf, closed: false }
    }

    pub fn finite(&self) -> Option<&Rational> {
        self.value.finite()
    }
}

/// A nonempty interval `lo .. hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: EndPoint,
    pub hi: EndPoint,
}

impl Interval {
    /// Validates the ends and rejects empty intervals.
    pub fn new(lo: EndPoint, hi: EndPoint) -> Result<Self, Error> {
        if lo.value == ExtReal::PosInf || hi.value == ExtReal::NegInf {
            return Err(Error::Invalid("interval end at the wrong infinity".into()));
        }
        if (lo.value.is_infinite() && lo.closed) || (hi.value.is_infinite() && hi.closed) {
            return Err(Error::Invalid("infinite interval ends must be open".into()));
        }
        let iv = Interval { lo, hi };
        if iv.is_empty() {
            return Err(Error::Invalid(format!("empty interval {iv}")));
        }
        Ok(iv)
    }

    pub fn real_line() -> Self {
        Interval { lo: EndPoint::neg_inf(), hi: EndPoint::pos_inf() }
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: EndPoint::closed(x.clone()), hi: EndPoint::closed(x) }
    }

    fn is_empty(&self) -> bool {
        match self.lo.value.cmp(&self.hi.value) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Equal => !(self.lo.closed && self.hi.closed),
            std::cmp::Ordering::Less => false,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let x = ExtReal::Finite(x.clone());
        let above = if self.lo.closed { x >= self.lo.value } else { x > self.lo.value };
        let below = if self.hi.closed { x <= self.hi.value } else { x < self.hi.value };
        above && below
    }

    /// Set inclusion `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        let lo_ok = match self.lo.value.cmp(&other.lo.value) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => other.lo.closed || !self.lo.closed,
        };
        let hi_ok = match self.hi.value.cmp(&other.hi.value) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => other.hi.closed || !self.hi.closed,
        };
        lo_ok && hi_ok
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = match self.lo.value.cmp(&other.lo.value) {
            std::cmp::Ordering::Greater => self.lo.clone(),
            std::cmp::Ordering::Less => other.lo.clone(),
            std::cmp::Ordering::Equal => EndPoint {
                value: self.lo.value.clone(),
                closed: self.lo.closed && other.lo.closed,
            },
        };
        let hi = match self.hi.value.cmp(&other.hi.value) {
            std::cmp::Ordering::Less => self.hi.clone(),
            std::cmp::Ordering::Greater => other.hi.clone(),
            std::cmp::Ordering::Equal => EndPoint {
                value: self.hi.value.clone(),
                closed: self.hi.closed && other.hi.closed,
            },
        };
        let iv = Interval { lo, hi };
        (!iv.is_empty()).then_some(iv)
    }

    /// A point strictly inside the interval (or the point itself when degenerate).
    pub fn interior_sample(&self) -> Rational {
        match (self.lo.finite(), self.hi.finite()) {
            (Some(a), Some(b)) => (a + b) / Rational::from_integer(2.into()),
            (Some(a), None) => a + Rational::one(),
            (None, Some(b)) => b - Rational::one(),
            (None, None) => Rational::zero(),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo.closed { '[' } else { '(' };
        let close = if self.hi.closed { ']' } else { ')' };
        write!(f, "{open}{}, {}{close}", self.lo.value, self.hi.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extreal::int;

    fn iv(lo: EndPoint, hi: EndPoint) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn rejects_empty_and_malformed() {
        assert!(Interval::new(EndPoint::open(int(1)), EndPoint::closed(int(1))).is_err());
        assert!(Interval::new(EndPoint::closed(int(2)), EndPoint::closed(int(1))).is_err());
        assert!(Interval::new(
            EndPoint { value: ExtReal::NegInf, closed: true },
            EndPoint::closed(int(1))
        )
        .is_err());
        assert!(Interval::new(EndPoint::closed(int(1)), EndPoint::closed(int(1))).is_ok());
    }

    #[test]
    fn containment_respects_open_ends() {
        let a = iv(EndPoint::open(int(0)), EndPoint::closed(int(1)));
        assert!(!a.contains(&int(0)));
        assert!(a.contains(&int(1)));
        let b = iv(EndPoint::closed(int(0)), EndPoint::pos_inf());
        assert!(a.is_subset_of(&b));
        assert!(!b.is_subset_of(&a));
        let c = iv(EndPoint::open(int(0)), EndPoint::pos_inf());
        assert!(a.is_subset_of(&c));
        assert!(!b.is_subset_of(&c));
    }

    #[test]
    fn intersection() {
        let a = iv(EndPoint::closed(int(0)), EndPoint::open(int(2)));
        let b = iv(EndPoint::open(int(1)), EndPoint::pos_inf());
        let c = a.intersect(&b).unwrap();
        assert_eq!(c, iv(EndPoint::open(int(1)), EndPoint::open(int(2))));
        let d = iv(EndPoint::closed(int(2)), EndPoint::pos_inf());
        assert!(a.intersect(&d).is_none());
    }
}
