//! Certified enclosures `[lo, hi]` for norm values.
//!
//! Point intervals stay points under every operation so that exact
//! evaluations compose exactly; non-degenerate results have their upper
//! end rounded outward.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

/// Pushes an upper bound up by a few ulps.
pub(crate) fn round_up(x: f64) -> f64 {
    if x.is_finite() {
        x.next_up().next_up()
    } else {
        x
    }
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };

    pub fn point(value: f64) -> Self {
        Self {
            lo: value,
            hi: value,
        }
    }

    /// `[lo, hi]` with `hi` rounded outward. Panics when `lo > hi`.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        if lo == hi {
            Self::point(lo)
        } else {
            Self {
                lo,
                hi: round_up(hi),
            }
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// `self ⊆ outer`.
    pub fn within(&self, outer: &Interval) -> bool {
        outer.lo <= self.lo && self.hi <= outer.hi
    }

    pub fn exact(&self) -> Option<f64> {
        self.is_point().then_some(self.lo)
    }

    fn lift(self, other: Self, f: impl Fn(f64, f64) -> f64) -> Self {
        if self.is_point() && other.is_point() {
            Self::point(f(self.lo, other.lo))
        } else {
            Self::new(f(self.lo, other.lo), f(self.hi, other.hi))
        }
    }

    /// Multiplication by a non-negative scalar.
    pub fn scale(self, factor: f64) -> Self {
        debug_assert!(factor >= 0.0);
        self.lift(Self::point(factor), |a, b| a * b)
    }

    /// `sqrt(a² + b²)` for non-negative enclosures.
    pub fn hypot(self, other: Self) -> Self {
        self.lift(other, f64::hypot)
    }

    pub fn max(self, other: Self) -> Self {
        self.lift(other, f64::max)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl std::ops::Add for Interval {
    type Output = Interval;

    fn add(self, other: Self) -> Self {
        self.lift(other, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_stay_points() {
        let a = Interval::point(3.0).hypot(Interval::point(4.0));
        assert_eq!(a, Interval::point(5.0));
        assert!((a + Interval::point(1.0)).is_point());
    }

    #[test]
    fn outward_rounding_on_upper_end() {
        let a = Interval::new(1.0, 2.0) + Interval::point(1.0);
        assert_eq!(a.lo, 2.0);
        assert!(a.hi > 3.0 && a.hi < 3.0 + 1e-14);
        assert!(Interval::new(0.0, f64::INFINITY).hi.is_infinite());
    }

    #[test]
    fn nesting() {
        let outer = Interval::new(1.0, 3.0);
        assert!(Interval::new(1.5, 2.0).within(&outer));
        assert!(!Interval::new(0.5, 2.0).within(&outer));
    }
}
