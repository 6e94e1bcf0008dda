//! Spectral constants as conservative enclosures.
//!
//! Every root here is found by bisection on a verified sign change, then
//! widened by [`DEFAULT_INFLATION`](crate::directed::DEFAULT_INFLATION).
//! Bessel zeros are located by scanning `J_ν` for sign changes, which keeps
//! the zero index `m` right even where the McMahon expansion is a poor guess
//! (small `m`, large `ν`).

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::directed::{DirectedValue, DEFAULT_INFLATION};
use crate::error::{Error, Result};
use crate::special::{self, powi, DimensionParams};
use crate::two_ball;

/// Bisection and inflation settings for the root finders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootTolerance {
    /// Bisection stops once the bracket is at most this wide (absolute).
    pub bisection: f64,
    /// Relative widening applied to each side of the final bracket.
    pub inflation: f64,
}

impl Default for RootTolerance {
    fn default() -> Self {
        Self {
            bisection: 1e-12,
            inflation: DEFAULT_INFLATION,
        }
    }
}

impl RootTolerance {
    /// Same inflation, bisection tolerance divided by `factor`.
    pub fn tighter(&self, factor: f64) -> Self {
        Self {
            bisection: self.bisection / factor,
            inflation: self.inflation,
        }
    }
}

/// Step used when scanning `J_ν` for sign changes; consecutive zeros of
/// `J_ν`, `ν ≥ 0`, are more than `3` apart.
const SCAN_STEP: f64 = 0.25;

/// Bisects `[lo, hi]` until it is narrower than `tol`. The closure returns
/// `true` where the function has the same sign as at `hi`.
fn bisect(mut lo: f64, mut hi: f64, tol: f64, mut same_as_hi: impl FnMut(f64) -> Result<bool>) -> Result<(f64, f64)> {
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if same_as_hi(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
        if iterations > 2000 {
            return Err(Error::NoConvergence { what: "bisect" });
        }
    }
    Ok((lo, hi))
}

impl RootTolerance {
    /// Enclosure of a bisection bracket: widened by the bisection tolerance,
    /// then by the relative inflation. The extra `bisection` on each side
    /// makes a run at half the tolerance land inside this one.
    pub fn enclose(&self, lo: f64, hi: f64) -> DirectedValue {
        DirectedValue::from_bracket(lo - self.bisection, hi + self.bisection, self.inflation)
    }
}

/// The first `count` positive zeros of `J_ν`.
pub fn bessel_zeros(nu: f64, count: usize) -> Result<Vec<DirectedValue>> {
    bessel_zeros_with(nu, count, &RootTolerance::default())
}

pub fn bessel_zeros_with(nu: f64, count: usize, tol: &RootTolerance) -> Result<Vec<DirectedValue>> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::Domain {
            what: "bessel_zeros (nu >= 0)",
            value: nu,
        });
    }
    let mut zeros = Vec::with_capacity(count);
    // j_{ν,1} > ν, and J_ν > 0 on (0, j_{ν,1}).
    let mut left = nu.max(SCAN_STEP);
    let mut left_value = special::bessel_j(nu, left)?;
    while zeros.len() < count {
        let right = left + SCAN_STEP;
        let right_value = special::bessel_j(nu, right)?;
        if right_value == 0.0 || left_value.signum() != right_value.signum() {
            let right_positive = right_value > 0.0;
            let (lo, hi) = bisect(left, right, tol.bisection, |x| {
                Ok((special::bessel_j(nu, x)? > 0.0) == right_positive)
            })?;
            let enclosure = tol.enclose(lo, hi);
            let at_lo = special::bessel_j(nu, enclosure.lo())?;
            let at_hi = special::bessel_j(nu, enclosure.hi())?;
            if at_lo * at_hi >= 0.0 {
                return Err(Error::NoBracket {
                    what: "bessel_zero",
                    lo: enclosure.lo(),
                    hi: enclosure.hi(),
                });
            }
            zeros.push(enclosure);
        }
        left = right;
        left_value = right_value;
        if left > 1e5 {
            return Err(Error::NoConvergence {
                what: "bessel_zeros scan",
            });
        }
    }
    Ok(zeros)
}

/// Enclosure of `j_{ν,m}`, the `m`-th positive zero of `J_ν`.
pub fn bessel_zero(nu: f64, m: usize) -> Result<DirectedValue> {
    bessel_zero_with(nu, m, &RootTolerance::default())
}

pub fn bessel_zero_with(nu: f64, m: usize, tol: &RootTolerance) -> Result<DirectedValue> {
    if m == 0 {
        return Err(Error::Domain {
            what: "bessel_zero (m >= 1)",
            value: 0.0,
        });
    }
    Ok(bessel_zeros_with(nu, m, tol)?[m - 1])
}

/// McMahon's asymptotic expansion of `j_{ν,m}` (four terms).
pub fn mcmahon(nu: f64, m: usize) -> f64 {
    let mu = 4.0 * nu * nu;
    let beta = (m as f64 + 0.5 * nu - 0.25) * PI;
    let e = 8.0 * beta;
    beta - (mu - 1.0) / e
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e)
        - 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * powi(e, 5))
}

/// Zeros of `J_ν` for Mittag-Leffler type sums: the first
/// [`ZeroSeries::EXACT`] are bisected, the rest taken from McMahon's
/// expansion.
///
/// Tails are bounded with `j_{ν,m} ≥ j_{0,m} > (m - 1/4)π`, valid for every
/// `ν ≥ 0`.
#[derive(Debug, Clone)]
pub struct ZeroSeries {
    nu: f64,
    exact: Vec<f64>,
}

impl ZeroSeries {
    pub const EXACT: usize = 64;

    pub fn new(nu: f64) -> Result<Self> {
        let exact = bessel_zeros(nu, Self::EXACT)?
            .into_iter()
            .map(|z| z.mid())
            .collect();
        Ok(Self { nu, exact })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `j_{ν,m}` (1-based).
    pub fn zero(&self, m: usize) -> f64 {
        assert!(m >= 1, "zero index is 1-based");
        if m <= self.exact.len() {
            self.exact[m - 1]
        } else {
            mcmahon(self.nu, m)
        }
    }

    /// Lower bound `(m - 1/4)π` on `j_{ν,m}`.
    pub fn lower_bound(m: usize) -> f64 {
        (m as f64 - 0.25) * PI
    }

    /// Bound on `Σ_{m > n} 1/(j_{ν,m}^p - r^p)` for `p ≥ 2`.
    pub fn gap_tail_bound(p: u32, r: f64, n: usize) -> f64 {
        let l = Self::lower_bound(n + 1);
        let ratio = powi(r / l, p);
        if ratio >= 1.0 {
            return f64::INFINITY;
        }
        let base = (n as f64 - 0.25) * PI;
        // Σ_{m>n} ((m-1/4)π)^(-p) ≤ ∫_n^∞ ((x-1/4)π)^(-p) dx
        let integral = 1.0 / ((p as f64 - 1.0) * PI * powi(base, p - 1));
        integral / (1.0 - ratio)
    }

    /// `Σ_m 1/(j_{ν,m}^p - r^p)` summed until the tail bound drops below
    /// `target`. Returns the partial sum and the bound on what was left out.
    pub fn inverse_power_gap_sum(&self, p: u32, r: f64, target: f64) -> (f64, f64) {
        let rp = powi(r, p);
        let mut sum = special::CompensatedSum::default();
        let mut m = 1;
        loop {
            let j = self.zero(m);
            sum.add(1.0 / (powi(j, p) - rp));
            if m >= Self::EXACT {
                let tail = Self::gap_tail_bound(p, r, m);
                if tail < target || m > 1_000_000 {
                    return (sum.value(), tail);
                }
            }
            m += 1;
        }
    }
}

/// Enclosures of the constants attached to one dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConstants {
    pub params: DimensionParams,
    /// `j_{ν,1}`.
    pub j1: DirectedValue,
    /// `j_{ν,2}`.
    pub j2: DirectedValue,
    /// `k_ν`, first positive zero of `f_ν`.
    pub k: DirectedValue,
    /// `a_I`, where `b(a) = j_ν/k_ν`.
    pub a_i: DirectedValue,
    /// `a_S`, where `a K(a) = j_ν/k_ν`.
    pub a_s: DirectedValue,
}

impl SpectralConstants {
    pub fn compute(params: &DimensionParams) -> Result<Self> {
        Self::compute_with(params, &RootTolerance::default())
    }

    pub fn compute_with(params: &DimensionParams, tol: &RootTolerance) -> Result<Self> {
        let zeros = bessel_zeros_with(params.nu(), 2, tol)?;
        let (j1, j2) = (zeros[0], zeros[1]);
        let k = k_nu_between(params, &j1, &j2, tol)?;
        let a_i = a_i(params, &j1, &k);
        let a_s = a_s_with(params, &j1, &k, tol)?;
        Ok(Self {
            params: *params,
            j1,
            j2,
            k,
            a_i,
            a_s,
        })
    }

    /// `k(a)`: first positive zero of `r ↦ f_ν(rKa) + K^d f_ν(rb)`.
    pub fn k_of_a(&self, a: f64) -> Result<DirectedValue> {
        self.k_of_a_with(a, &RootTolerance {
            bisection: 1e-13,
            inflation: DEFAULT_INFLATION,
        })
    }

    pub fn k_of_a_with(&self, a: f64, tol: &RootTolerance) -> Result<DirectedValue> {
        k_of_a_impl(self, a, tol)
    }

    /// `μ(a, b(a)) = k(a)⁴`.
    pub fn mu(&self, a: f64) -> Result<DirectedValue> {
        let k = self.k_of_a(a)?;
        Ok(k.map_increasing(|x| powi(x, 4)).inflate(4.0 * f64::EPSILON))
    }
}

fn k_nu_between(
    params: &DimensionParams,
    j1: &DirectedValue,
    j2: &DirectedValue,
    tol: &RootTolerance,
) -> Result<DirectedValue> {
    // f_ν runs from -∞ to +∞ on (j₁, j₂); start just clear of both poles.
    let lo = j1.hi() + 1e-6;
    let hi = j2.lo() - 1e-6;
    let sign = |r: f64| -> Result<f64> { Ok(special::f_nu(params, r)?.signum()) };
    if sign(lo)? >= 0.0 || sign(hi)? <= 0.0 {
        return Err(Error::NoBracket {
            what: "k_nu",
            lo,
            hi,
        });
    }
    let (a, b) = bisect(lo, hi, tol.bisection, |r| Ok(sign(r)? > 0.0))?;
    let k = tol.enclose(a, b);
    if sign(k.lo())? >= 0.0 || sign(k.hi())? <= 0.0 {
        return Err(Error::NoBracket {
            what: "k_nu (after inflation)",
            lo: k.lo(),
            hi: k.hi(),
        });
    }
    Ok(k)
}

/// Enclosure of `k_ν`, the unique zero of `f_ν` in `(j_{ν,1}, j_{ν,2})`.
pub fn k_nu(params: &DimensionParams) -> Result<DirectedValue> {
    k_nu_with(params, &RootTolerance::default())
}

pub fn k_nu_with(params: &DimensionParams, tol: &RootTolerance) -> Result<DirectedValue> {
    let zeros = bessel_zeros_with(params.nu(), 2, tol)?;
    k_nu_between(params, &zeros[0], &zeros[1], tol)
}

/// `a_I` from `a_I^d = 1 - (j/k)^d`. The upper end uses `j⁻` and `k⁺`.
pub fn a_i(params: &DimensionParams, j: &DirectedValue, k: &DirectedValue) -> DirectedValue {
    let d = params.d();
    let formula = |c: f64| {
        let rest = 1.0 - powi(c.min(1.0), d);
        libm::pow(rest.max(0.0), 1.0 / params.dim())
    };
    let c_low = j.lo() / k.hi();
    let c_high = j.hi() / k.lo();
    // decreasing in c = j/k
    let hi = formula(c_low);
    let lo = formula(c_high);
    DirectedValue::from_bracket(lo, hi, DEFAULT_INFLATION)
}

/// `a_S`, the root in `[0, 1]` of `a K(a) = j/k`. The lower end uses `j⁻` and
/// `k⁺`.
pub fn a_s(params: &DimensionParams, j: &DirectedValue, k: &DirectedValue) -> Result<DirectedValue> {
    a_s_with(params, j, k, &RootTolerance::default())
}

/// Root of the increasing map `a ↦ a K(a) - c` on `[0, 1]`.
pub(crate) fn solve_a_k_a(params: &DimensionParams, c: f64, tol: f64) -> Result<(f64, f64)> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::NoBracket {
            what: "a K(a) = c",
            lo: 0.0,
            hi: 1.0,
        });
    }
    bisect(0.0, 1.0, tol, |a| {
        Ok(a * two_ball::asymmetry_on_constraint(params, a) - c >= 0.0)
    })
}

pub fn a_s_with(
    params: &DimensionParams,
    j: &DirectedValue,
    k: &DirectedValue,
    tol: &RootTolerance,
) -> Result<DirectedValue> {
    let c_low = j.lo() / k.hi();
    let c_high = j.hi() / k.lo();
    let (lo, _) = solve_a_k_a(params, c_low, tol.bisection)?;
    let (_, hi) = solve_a_k_a(params, c_high, tol.bisection)?;
    Ok(tol.enclose(lo, hi).clamp_unit())
}

impl DirectedValue {
    fn clamp_unit(self) -> Self {
        DirectedValue::new(self.lo().max(0.0), self.hi().min(1.0)).unwrap_or(self)
    }
}

/// Smooth form of the secular equation: `h(r) J_ν(rKa) J_ν(rb)` with
/// `h(r) = f_ν(rKa) + K^d f_ν(rb)`, written without any division by `J_ν`.
fn determinant(params: &DimensionParams, a: f64, b: f64, k_factor: f64, r: f64) -> Result<f64> {
    let nu = params.nu();
    let d = params.d();
    let x = r * k_factor * a;
    let y = r * b;
    let jx = special::bessel_j(nu, x)?;
    let jy = special::bessel_j(nu, y)?;
    let first = if x > 0.0 {
        let jx1 = special::bessel_j(nu + 1.0, x)?;
        powi(x, d - 1) * (jx1 * jy + special::ratio_i(nu, x)? * jx * jy)
    } else {
        0.0
    };
    let second = if y > 0.0 && k_factor > 0.0 {
        let jy1 = special::bessel_j(nu + 1.0, y)?;
        powi(k_factor, d) * powi(y, d - 1) * (jy1 * jx + special::ratio_i(nu, y)? * jy * jx)
    } else {
        0.0
    };
    Ok(first + second)
}

fn k_of_a_impl(c: &SpectralConstants, a: f64, tol: &RootTolerance) -> Result<DirectedValue> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::Domain {
            what: "k_of_a (0 <= a <= 1)",
            value: a,
        });
    }
    if a == 0.0 || a == 1.0 {
        return Ok(c.k);
    }
    let params = &c.params;
    let b = two_ball::b_of_a(params, a)?;
    let kf = two_ball::asymmetry_on_constraint(params, a);
    let ka = kf * a;
    if ka == 0.0 || b == 0.0 {
        // One factor has underflowed: the problem reduces to a single ball.
        let scale = if ka == 0.0 { b } else { ka };
        return Ok(c.k.map_increasing(|k| k / scale).inflate(tol.inflation));
    }
    let (j1, j2) = (c.j1.mid(), c.j2.mid());
    let mut poles = [j1 / ka, j1 / b, j2 / ka, j2 / b];
    poles.sort_by(|x, y| x.total_cmp(y));
    let p1 = poles[0];
    let p2 = poles[1];
    // Pole arcs meet (point M): the root is squeezed between them.
    if p2 - p1 <= 1e-12 * p1 {
        return Ok(DirectedValue::from_bracket(p1, p2, tol.inflation + 2.0 * c.j1.width() / j1));
    }
    let phi = |r: f64| determinant(params, a, b, kf, r);
    // h < 0 right of p1 and h > 0 left of p2, while J_ν(rKa) J_ν(rb) < 0 on
    // (p1, p2); so the smooth determinant is positive near p1 and negative
    // near p2. Shrink the offsets until the signs are resolved.
    const OFFSETS: [f64; 5] = [1e-7, 1e-9, 1e-11, 1e-13, 0.0];
    let mut lo = None;
    for off in OFFSETS {
        let x = p1 * (1.0 + off);
        if x < p2 && phi(x)? > 0.0 {
            lo = Some(x);
            break;
        }
    }
    let mut hi = None;
    for off in OFFSETS {
        let x = p2 * (1.0 - off);
        if x > p1 && phi(x)? < 0.0 {
            hi = Some(x);
            break;
        }
    }
    let (lo, hi) = match (lo, hi) {
        (Some(lo), Some(hi)) if lo < hi => (lo, hi),
        _ => {
            return Err(Error::NoBracket {
                what: "k_of_a",
                lo: p1,
                hi: p2,
            })
        }
    };
    let (x, y) = bisect(lo, hi, tol.bisection, |r| Ok(phi(r)? < 0.0))?;
    Ok(tol.enclose(x, y))
}

/// Enclosure of `k(a)` for `a ∈ [0, 1]`.
pub fn k_of_a(params: &DimensionParams, a: f64) -> Result<DirectedValue> {
    SpectralConstants::compute(params)?.k_of_a(a)
}

/// Enclosure of `μ(a, b(a)) = k(a)⁴`.
pub fn mu(params: &DimensionParams, a: f64) -> Result<DirectedValue> {
    SpectralConstants::compute(params)?.mu(a)
}

/// The point `M` where the pole arcs `kKa = j_ν` and `kb = j_ν` cross.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MPoint {
    /// Root of `2X^d + X - 1` in `(0, 1)`.
    pub b: DirectedValue,
    pub a: DirectedValue,
    /// `k_M = j_ν / b_M`.
    pub k: DirectedValue,
}

/// `P(X) = 2X^d + X - 1`.
pub fn m_polynomial(params: &DimensionParams, x: f64) -> f64 {
    2.0 * powi(x, params.d()) + x - 1.0
}

pub fn m_point(params: &DimensionParams) -> Result<MPoint> {
    let j = bessel_zero(params.nu(), 1)?;
    m_point_with(params, &j)
}

pub fn m_point_with(params: &DimensionParams, j: &DirectedValue) -> Result<MPoint> {
    // P(0) = -1 < 0 < 2 = P(1), increasing.
    let (lo, hi) = bisect(0.0, 1.0, 1e-16, |x| Ok(m_polynomial(params, x) >= 0.0))?;
    let b = DirectedValue::from_bracket(lo, hi, 4.0 * f64::EPSILON);
    let a = b.map_decreasing(|x| {
        libm::pow((1.0 - powi(x, params.d())).max(0.0), 1.0 / params.dim())
    });
    let k = DirectedValue::new(j.lo() / b.hi(), j.hi() / b.lo())?;
    Ok(MPoint { b, a, k })
}
