//! Bessel functions of the first kind and the radial functions of the
//! clamped-plate two-ball problem.
//!
//! Values of `J_ν` and `I_ν` come from the ascending series (with
//! Neumaier-compensated summation) and, for `J_ν` at larger arguments, from
//! Miller's backward recurrence. The order ratios `J_{ν+1}/J_ν` and
//! `I_{ν+1}/I_ν` never go through the function values: they are evaluated
//! directly from their continued fractions, which stay accurate up to the
//! zeros of `J_ν`. Everything built on top (`f_ν`, `g_ν`, `f_ν'`) uses only
//! the ratios.
//!
//! The radial functions are
//!
//! ```text
//! f_ν(r) = r^(d-1) [J_{ν+1}/J_ν + I_{ν+1}/I_ν](r)
//! g_ν(r) = r^(1-d) [J_{ν+1}/J_ν - I_{ν+1}/I_ν](r) = 4 r^(4-d) S_ν(r)
//! S_ν(r) = Σ_m 1 / (j_{ν,m}^4 - r^4)
//! ```

use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::roots::{self, ZeroSeries};

/// Evaluations closer than this (absolute) to a zero of `J_ν` are reported
/// as poles of the ratio `J_{ν+1}/J_ν`.
pub const POLE_EXCLUSION: f64 = 1e-8;

/// Above this argument `J_ν` switches from the ascending series to Miller's
/// backward recurrence.
const SERIES_LIMIT: f64 = 8.0;

const MAX_TERMS: usize = 100_000;

/// Dimension `d ≥ 2` of the ambient space and the constants attached to it.
///
/// The Bessel order `ν = d/2 - 1` is kept as the integer `2ν = d - 2`, so odd
/// dimensions give exact half-integer orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimensionParams {
    d: u32,
}

impl DimensionParams {
    pub fn new(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain {
                what: "dimension (d >= 2)",
                value: d as f64,
            });
        }
        Ok(Self { d })
    }

    #[inline]
    pub fn d(&self) -> u32 {
        self.d
    }

    /// `d` as a float, for exponents.
    #[inline]
    pub fn dim(&self) -> f64 {
        self.d as f64
    }

    /// `2ν = d - 2`.
    #[inline]
    pub fn twice_nu(&self) -> u32 {
        self.d - 2
    }

    #[inline]
    pub fn nu(&self) -> f64 {
        self.twice_nu() as f64 / 2.0
    }

    /// Volume of the unit ball, via `ω_d = 2π/d · ω_{d-2}`.
    pub fn omega_d(&self) -> f64 {
        let (mut omega, start) = if self.d.is_multiple_of(2) { (1.0, 0) } else { (2.0, 1) };
        let mut k = start + 2;
        while k <= self.d {
            omega *= 2.0 * PI / k as f64;
            k += 2;
        }
        omega
    }

    /// Isoperimetric constant `C_d = |∂B₁| / |B₁|^((d-1)/d) = d ω_d^(1/d)`.
    pub fn c_d(&self) -> f64 {
        self.dim() * libm::pow(self.omega_d(), 1.0 / self.dim())
    }

    /// Volume of the ball of radius `r`.
    pub fn ball_measure(&self, r: f64) -> f64 {
        self.omega_d() * powi(r, self.d)
    }

    /// Radius of the ball of measure `m`.
    pub fn ball_radius(&self, m: f64) -> f64 {
        libm::pow(m / self.omega_d(), 1.0 / self.dim())
    }
}

/// Direction of a signed infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Infinity {
    Positive,
    Negative,
}

/// A real value or a pole marker.
///
/// `Pole` is produced only within [`POLE_EXCLUSION`] of a zero of `J_ν`; the
/// sign records from which side the pole is approached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Pole(Infinity),
}

impl ExtendedReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::Pole(_) => None,
        }
    }

    pub fn is_pole(self) -> bool {
        matches!(self, ExtendedReal::Pole(_))
    }

    /// The value with poles mapped to `±∞`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::Finite(v) => v,
            ExtendedReal::Pole(Infinity::Positive) => f64::INFINITY,
            ExtendedReal::Pole(Infinity::Negative) => f64::NEG_INFINITY,
        }
    }

    /// `-1`, `0` or `1`; poles count with their sign.
    pub fn signum(self) -> f64 {
        let v = self.to_f64();
        if v > 0.0 {
            1.0
        } else if v < 0.0 {
            -1.0
        } else {
            0.0
        }
    }

    /// Turns a pole into [`Error::Pole`].
    pub fn require_finite(self, what: &'static str, at: f64) -> Result<f64> {
        self.finite().ok_or(Error::Pole { what, at })
    }

    fn scale(self, factor: f64) -> Self {
        match self {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(v * factor),
            ExtendedReal::Pole(s) if factor >= 0.0 => ExtendedReal::Pole(s),
            ExtendedReal::Pole(Infinity::Positive) => ExtendedReal::Pole(Infinity::Negative),
            ExtendedReal::Pole(Infinity::Negative) => ExtendedReal::Pole(Infinity::Positive),
        }
    }
}

/// `x^n` by repeated squaring.
pub(crate) fn powi(x: f64, n: u32) -> f64 {
    let mut base = x;
    let mut exp = n;
    let mut acc = 1.0;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        base *= base;
        exp >>= 1;
    }
    acc
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn check_args(what: &'static str, nu: f64, r: f64) -> Result<()> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::Domain { what, value: nu });
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain { what, value: r });
    }
    Ok(())
}

/// `(x/2)^ν / Γ(ν+1)`.
fn series_prefactor(nu: f64, half: f64) -> f64 {
    if nu == 0.0 {
        1.0
    } else if nu < 150.0 {
        libm::pow(half, nu) / libm::tgamma(nu + 1.0)
    } else {
        libm::exp(nu * libm::log(half) - libm::lgamma(nu + 1.0))
    }
}

/// Ascending series `Σ (±1)^k (r/2)^(2k+ν) / (k! Γ(k+ν+1))`.
fn ascending_series(nu: f64, r: f64, alternating: bool) -> f64 {
    let half = 0.5 * r;
    let q = if alternating { -half * half } else { half * half };
    let mut term = series_prefactor(nu, half);
    let mut sum = CompensatedSum::default();
    sum.add(term);
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum.add(term);
        if term.abs() <= 1e-17 * sum.value().abs() && kf > half {
            break;
        }
    }
    sum.value()
}

/// `J_ν(r)` by Miller's backward recurrence, normalised with
/// `(r/2)^ν = Σ_k (ν+2k) Γ(ν+k)/k! · J_{ν+2k}(r)`.
fn miller_j(nu: f64, r: f64) -> f64 {
    let start = libm::ceil(r + 20.0 + 10.0 * libm::cbrt(r)) as usize;
    let top = start + (start & 1);
    // γ_k = Γ(ν+k)/k!, stepped downward from k = top/2.
    let mut k = top / 2;
    let mut gamma_k = libm::exp(libm::lgamma(nu + k as f64) - libm::lgamma(k as f64 + 1.0));
    let mut upper = 0.0; // J_{ν+n+1}
    let mut current = 1e-300; // J_{ν+n}
    let mut norm = CompensatedSum::default();
    for n in (1..=top).rev() {
        if n % 2 == 0 {
            norm.add((nu + n as f64) * gamma_k * current);
            if k > 1 {
                gamma_k *= k as f64 / (nu + k as f64 - 1.0);
                k -= 1;
            }
        }
        let lower = 2.0 * (nu + n as f64) / r * current - upper;
        upper = current;
        current = lower;
        if current.abs() > 1e250 {
            current *= 1e-250;
            upper *= 1e-250;
            let rescaled = norm.value() * 1e-250;
            norm = CompensatedSum::default();
            norm.add(rescaled);
        }
    }
    let gamma_nu1 = if nu < 150.0 {
        libm::tgamma(nu + 1.0)
    } else {
        libm::exp(libm::lgamma(nu + 1.0))
    };
    norm.add(gamma_nu1 * current);
    let lhs = if nu == 0.0 { 1.0 } else { libm::pow(0.5 * r, nu) };
    current * (lhs / norm.value())
}

/// Bessel function of the first kind `J_ν(r)` for `ν ≥ 0`, `r ≥ 0`.
pub fn bessel_j(nu: f64, r: f64) -> Result<f64> {
    check_args("bessel_j", nu, r)?;
    if r == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if r <= SERIES_LIMIT {
        Ok(ascending_series(nu, r, true))
    } else {
        Ok(miller_j(nu, r))
    }
}

/// Modified Bessel function of the first kind `I_ν(r)` for `ν ≥ 0`, `r ≥ 0`.
pub fn bessel_i(nu: f64, r: f64) -> Result<f64> {
    check_args("bessel_i", nu, r)?;
    if r == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    Ok(ascending_series(nu, r, false))
}

/// Modified Lentz evaluation of `b₀ + s/(b₁ + s/(b₂ + ...))` with
/// `b_n = 2(ν+1+n)/r`.
fn lentz(nu: f64, r: f64, s: f64, what: &'static str) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let b = |n: usize| 2.0 * (nu + 1.0 + n as f64) / r;
    let mut f = b(0);
    if f == 0.0 {
        f = TINY;
    }
    let mut c = f;
    let mut d = 0.0;
    for n in 1..MAX_TERMS {
        let bn = b(n);
        d = bn + s * d;
        if d == 0.0 {
            d = TINY;
        }
        c = bn + s / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            return Ok(f);
        }
    }
    Err(Error::NoConvergence { what })
}

/// `J_ν(r) / J_{ν+1}(r)` from the continued fraction
/// `2(ν+1)/r - 1/(2(ν+2)/r - 1/(2(ν+3)/r - ...))`.
///
/// Smooth through the zeros of `J_ν`, where its slope is exactly `-1`.
pub fn inverse_ratio_j(nu: f64, r: f64) -> Result<f64> {
    check_args("inverse_ratio_j", nu, r)?;
    if r == 0.0 {
        return Ok(f64::INFINITY);
    }
    lentz(nu, r, -1.0, "inverse_ratio_j")
}

/// `J_{ν+1}(r) / J_ν(r)`, pole-tagged within [`POLE_EXCLUSION`] of a zero of
/// `J_ν`.
pub fn ratio_j(nu: f64, r: f64) -> Result<ExtendedReal> {
    check_args("ratio_j", nu, r)?;
    if r == 0.0 {
        return Ok(ExtendedReal::Finite(0.0));
    }
    let inv = lentz(nu, r, -1.0, "ratio_j")?;
    // Near a zero j of J_ν the inverse ratio behaves like j - r.
    if inv.abs() <= POLE_EXCLUSION {
        let side = if inv >= 0.0 {
            Infinity::Positive
        } else {
            Infinity::Negative
        };
        return Ok(ExtendedReal::Pole(side));
    }
    Ok(ExtendedReal::Finite(1.0 / inv))
}

/// `I_{ν+1}(r) / I_ν(r)`, in `[0, 1)` and increasing in `r`.
pub fn ratio_i(nu: f64, r: f64) -> Result<f64> {
    check_args("ratio_i", nu, r)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / lentz(nu, r, 1.0, "ratio_i")?)
}

/// Difference `J_{ν+1}/J_ν - I_{ν+1}/I_ν` at `r`.
pub(crate) fn ratio_difference(nu: f64, r: f64) -> Result<ExtendedReal> {
    let rj = ratio_j(nu, r)?;
    let ri = ratio_i(nu, r)?;
    Ok(match rj {
        ExtendedReal::Finite(v) => ExtendedReal::Finite(v - ri),
        pole => pole,
    })
}

/// `f_ν(r) = r^(d-1) [J_{ν+1}/J_ν + I_{ν+1}/I_ν](r)`.
///
/// Increasing between consecutive zeros of `J_ν`, with `f_ν(0) = 0`.
pub fn f_nu(params: &DimensionParams, r: f64) -> Result<ExtendedReal> {
    if r == 0.0 {
        return Ok(ExtendedReal::Finite(0.0));
    }
    let nu = params.nu();
    let rj = ratio_j(nu, r)?;
    let ri = ratio_i(nu, r)?;
    let weight = powi(r, params.d() - 1);
    Ok(match rj {
        ExtendedReal::Finite(v) => ExtendedReal::Finite(weight * (v + ri)),
        pole => pole,
    })
}

/// `g_ν(r) = r^(1-d) [J_{ν+1}/J_ν - I_{ν+1}/I_ν](r)` for `r > 0`.
pub fn g_nu(params: &DimensionParams, r: f64) -> Result<ExtendedReal> {
    if !(r > 0.0) {
        return Err(Error::Domain {
            what: "g_nu (r > 0)",
            value: r,
        });
    }
    let diff = ratio_difference(params.nu(), r)?;
    Ok(diff.scale(1.0 / powi(r, params.d() - 1)))
}

/// `f_ν'(r) = 2 r^(d-1) + (J_{ν+1}/J_ν - I_{ν+1}/I_ν)(r) · f_ν(r)`.
pub fn f_nu_prime(params: &DimensionParams, r: f64) -> Result<ExtendedReal> {
    if !(r > 0.0) {
        return Err(Error::Domain {
            what: "f_nu_prime (r > 0)",
            value: r,
        });
    }
    let nu = params.nu();
    let rj = match ratio_j(nu, r)? {
        ExtendedReal::Finite(v) => v,
        ExtendedReal::Pole(_) => return Ok(ExtendedReal::Pole(Infinity::Positive)),
    };
    let ri = ratio_i(nu, r)?;
    let weight = powi(r, params.d() - 1);
    let f = weight * (rj + ri);
    Ok(ExtendedReal::Finite(2.0 * weight + (rj - ri) * f))
}

/// Evaluator for `S_ν(r) = Σ_m 1/(j_{ν,m}⁴ - r⁴)` on `[0, k_ν]`.
///
/// Holds the zero table and `k_ν`, so building it once and evaluating many
/// times is cheap.
#[derive(Debug, Clone)]
pub struct SNu {
    params: DimensionParams,
    zeros: ZeroSeries,
    upper: f64,
}

/// Target bound on the truncated tail of `S_ν`.
pub const S_NU_TAIL: f64 = 1e-12;

impl SNu {
    pub fn new(params: &DimensionParams) -> Result<Self> {
        let zeros = ZeroSeries::new(params.nu())?;
        let k = roots::k_nu(params)?;
        Ok(Self {
            params: *params,
            zeros,
            upper: k.hi(),
        })
    }

    pub fn params(&self) -> &DimensionParams {
        &self.params
    }

    pub fn zeros(&self) -> &ZeroSeries {
        &self.zeros
    }

    /// `S_ν(r)` for `r ∈ [0, k_ν]`; pole-tagged at `j_{ν,1}`.
    pub fn eval(&self, r: f64) -> Result<ExtendedReal> {
        if !(r >= 0.0) || r > self.upper {
            return Err(Error::Domain {
                what: "s_nu (0 <= r <= k_nu)",
                value: r,
            });
        }
        let j1 = self.zeros.zero(1);
        if (r - j1).abs() <= POLE_EXCLUSION {
            let side = if r < j1 {
                Infinity::Positive
            } else {
                Infinity::Negative
            };
            return Ok(ExtendedReal::Pole(side));
        }
        let (sum, _tail) = self.zeros.inverse_power_gap_sum(4, r, S_NU_TAIL);
        Ok(ExtendedReal::Finite(sum))
    }
}

/// `S_ν(r)` for a single argument. Prefer [`SNu`] for repeated evaluation.
pub fn s_nu(params: &DimensionParams, r: f64) -> Result<ExtendedReal> {
    SNu::new(params)?.eval(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn dimension_constants() {
        let p = DimensionParams::new(2).unwrap();
        assert!(close(p.omega_d(), PI, 1e-15));
        let p = DimensionParams::new(3).unwrap();
        assert!(close(p.omega_d(), 4.0 * PI / 3.0, 1e-15));
        assert_eq!(p.nu(), 0.5);
        // C_d = |∂B₁| / |B₁|^((d-1)/d) with |∂B₁| = d ω_d.
        for d in 2..12 {
            let p = DimensionParams::new(d).unwrap();
            let w = p.omega_d();
            let expect = d as f64 * w / libm::pow(w, (d as f64 - 1.0) / d as f64);
            assert!(close(p.c_d(), expect, 1e-14));
        }
        assert!(DimensionParams::new(1).is_err());
    }

    #[test]
    fn bessel_values_at_origin() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1.0, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_i(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(2.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn negative_argument_is_rejected() {
        assert!(matches!(bessel_j(1.0, -1.0), Err(Error::Domain { .. })));
        assert!(matches!(bessel_i(1.0, -0.5), Err(Error::Domain { .. })));
        assert!(ratio_i(1.0, -0.5).is_err());
    }

    #[test]
    fn half_integer_closed_form() {
        for i in 1..300 {
            let r = 0.1 * i as f64;
            let expect = libm::sqrt(2.0 / (PI * r)) * libm::sin(r);
            let got = bessel_j(0.5, r).unwrap();
            // absolute scale: the closed form itself loses relative accuracy
            // only at the zeros of sin.
            assert!(
                (got - expect).abs() <= 1e-12 * expect.abs().max(1e-3),
                "r={r}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn ratio_limits() {
        assert_eq!(ratio_j(1.0, 0.0).unwrap(), ExtendedReal::Finite(0.0));
        let small = ratio_j(1.0, 1e-6).unwrap().finite().unwrap();
        assert!(small > 0.0 && small < 1e-6);
        assert_eq!(ratio_i(1.0, 0.0).unwrap(), 0.0);
        assert!(ratio_i(1.0, 2.0).unwrap() < ratio_i(1.0, 3.0).unwrap());
        // first zero of J₁
        assert!(ratio_j(1.0, 3.831_705_970_207_512).unwrap().is_pole());
    }

    #[test]
    fn f_nu_basics() {
        let p = DimensionParams::new(4).unwrap();
        assert_eq!(f_nu(&p, 0.0).unwrap(), ExtendedReal::Finite(0.0));
        assert!(g_nu(&p, 0.0).is_err());
        assert!(g_nu(&p, 0.1).unwrap().to_f64() > 0.0);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-17);
        }
        s.add(-1.0);
        assert!(close(s.value(), 1e-16, 1e-6));
    }
}
