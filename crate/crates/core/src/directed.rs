use core::fmt;

use crate::error::{Error, Result};

/// Relative inflation applied to each side of a freshly bisected bracket.
///
/// Two sides of `4e-10` plus a `1e-12` bisection bracket keep the total
/// width under `1e-9` relative for every value of order one or larger.
pub const DEFAULT_INFLATION: f64 = 4e-10;

/// A conservative enclosure `[lo, hi]` of a real constant.
///
/// This is ε-inflated floating point, not interval arithmetic with directed
/// hardware rounding: the true value is enclosed provided the underlying
/// function evaluations are accurate to their stated tolerance. `lo` plays
/// the role of `x⁻` and `hi` the role of `x⁺`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectedValue {
    lo: f64,
    hi: f64,
}

impl DirectedValue {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Domain {
                what: "DirectedValue::new (lo <= hi, finite)",
                value: lo - hi,
            });
        }
        Ok(Self { lo, hi })
    }

    /// Degenerate enclosure of an exactly known value.
    pub fn exact(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    /// Enclosure of a bisection bracket, widened by `rel` of its magnitude on
    /// each side.
    pub fn from_bracket(lo: f64, hi: f64, rel: f64) -> Self {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        Self {
            lo: lo - rel * lo.abs(),
            hi: hi + rel * hi.abs(),
        }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// `other ⊆ self`.
    pub fn encloses(&self, other: &DirectedValue) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Image under a nondecreasing map.
    pub fn map_increasing(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            lo: f(self.lo),
            hi: f(self.hi),
        }
    }

    /// Image under a nonincreasing map.
    pub fn map_decreasing(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            lo: f(self.hi),
            hi: f(self.lo),
        }
    }

    /// Widens both endpoints by `rel` of their magnitude.
    pub fn inflate(&self, rel: f64) -> Self {
        Self::from_bracket(self.lo, self.hi, rel)
    }

    /// Rounds `lo` down and `hi` up to `places` decimal places.
    ///
    /// This is how printed directed constants such as `k_ν⁺ = 4.611` are
    /// produced from a tight enclosure.
    pub fn outward_decimals(&self, places: u32) -> Self {
        let scale = libm::pow(10.0, places as f64);
        Self {
            lo: libm::floor(self.lo * scale) / scale,
            hi: libm::ceil(self.hi * scale) / scale,
        }
    }
}

impl fmt::Display for DirectedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
