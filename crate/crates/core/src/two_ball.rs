//! Constraint geometry of the two-ball problem and the secular function
//! `F_ν(k, a) = f_ν(kKa) + K^d f_ν(kb)`.
//!
//! Along the constraint `a^d + b^d = 1` the asymmetry factor reduces to
//! `K(a) = a^(d-1) / (1 + b^(d-1))`.

use crate::directed::DirectedValue;
use crate::error::{Error, Result};
use crate::special::{self, powi, DimensionParams, ExtendedReal};

fn check_unit(what: &'static str, a: f64) -> Result<()> {
    if (0.0..=1.0).contains(&a) {
        Ok(())
    } else {
        Err(Error::Domain { what, value: a })
    }
}

/// `b(a) = (1 - a^d)^(1/d)`.
///
/// `1 - a^d` is formed as `-expm1(d ln a)`, which keeps its relative accuracy
/// as `a → 1`.
pub fn b_of_a(params: &DimensionParams, a: f64) -> Result<f64> {
    check_unit("b_of_a (0 <= a <= 1)", a)?;
    if a == 0.0 {
        return Ok(1.0);
    }
    if a == 1.0 {
        return Ok(0.0);
    }
    let rest = -libm::expm1(params.dim() * libm::log(a));
    Ok(libm::pow(rest, 1.0 / params.dim()))
}

/// `K(a, b) = a^(d-1) / ((a^d + b^d)^((d-1)/d) + b^(d-1))`.
pub fn asymmetry_factor(params: &DimensionParams, a: f64, b: f64) -> f64 {
    let d = params.d();
    let sum = powi(a, d) + powi(b, d);
    let denom = libm::pow(sum, (params.dim() - 1.0) / params.dim()) + powi(b, d - 1);
    if denom == 0.0 {
        return 0.0;
    }
    powi(a, d - 1) / denom
}

/// `K(a)` on the constraint. Arguments outside `[0, 1]` are clamped.
pub(crate) fn asymmetry_on_constraint(params: &DimensionParams, a: f64) -> f64 {
    let a = a.clamp(0.0, 1.0);
    let b = b_of_a(params, a).unwrap_or(0.0);
    let d = params.d();
    powi(a, d - 1) / (1.0 + powi(b, d - 1))
}

/// A point `(a, b(a))` of the constraint with its asymmetry factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoBallPoint {
    pub params: DimensionParams,
    pub a: f64,
    pub b: f64,
    /// `K(a)`.
    pub k_factor: f64,
}

impl TwoBallPoint {
    pub fn new(params: &DimensionParams, a: f64) -> Result<Self> {
        let b = b_of_a(params, a)?;
        let d = params.d();
        let k_factor = powi(a, d - 1) / (1.0 + powi(b, d - 1));
        Ok(Self {
            params: *params,
            a,
            b,
            k_factor,
        })
    }

    #[allow(non_snake_case)]
    pub fn K(&self) -> f64 {
        self.k_factor
    }

    /// `(b', K')` with respect to `a`. Undefined at `a ∈ {0, 1}`.
    pub fn derivatives(&self) -> Result<(f64, f64)> {
        derivatives(self)
    }
}

/// `K(a)` on the constraint.
#[allow(non_snake_case)]
pub fn K_of(point: &TwoBallPoint) -> f64 {
    point.k_factor
}

/// `b' = -A/B` and `K' = (d-1)(b+1)K² / (abA)` with `A = a^(d-1)`,
/// `B = b^(d-1)`.
pub fn derivatives(point: &TwoBallPoint) -> Result<(f64, f64)> {
    let (a, b, k) = (point.a, point.b, point.k_factor);
    if !(a > 0.0 && a < 1.0) || b == 0.0 {
        return Err(Error::Domain {
            what: "derivatives (0 < a < 1)",
            value: a,
        });
    }
    let d = point.params.d();
    let big_a = powi(a, d - 1);
    let big_b = powi(b, d - 1);
    let db = -big_a / big_b;
    let dk = (d as f64 - 1.0) * (b + 1.0) * k * k / (a * b * big_a);
    Ok((db, dk))
}

fn add_terms(x: ExtendedReal, y: ExtendedReal) -> ExtendedReal {
    match (x, y) {
        (ExtendedReal::Finite(u), ExtendedReal::Finite(v)) => ExtendedReal::Finite(u + v),
        (ExtendedReal::Pole(p), _) | (_, ExtendedReal::Pole(p)) => ExtendedReal::Pole(p),
    }
}

fn scaled(x: ExtendedReal, s: f64) -> ExtendedReal {
    match x {
        ExtendedReal::Finite(v) => ExtendedReal::Finite(s * v),
        pole if s > 0.0 => pole,
        ExtendedReal::Pole(_) => ExtendedReal::Finite(0.0),
    }
}

/// `F_ν(k, a) = f_ν(kK(a)a) + K(a)^d f_ν(kb(a))`.
#[allow(non_snake_case)]
pub fn F_nu(params: &DimensionParams, k: f64, a: f64) -> Result<ExtendedReal> {
    if !(k > 0.0) {
        return Err(Error::Domain {
            what: "F_nu (k > 0)",
            value: k,
        });
    }
    let p = TwoBallPoint::new(params, a)?;
    secular_at(&p, k)
}

pub(crate) fn secular_at(p: &TwoBallPoint, k: f64) -> Result<ExtendedReal> {
    let first = special::f_nu(&p.params, k * p.k_factor * p.a)?;
    if p.k_factor == 0.0 {
        return Ok(first);
    }
    let second = special::f_nu(&p.params, k * p.b)?;
    Ok(add_terms(first, scaled(second, powi(p.k_factor, p.params.d()))))
}

/// Enclosure of `2(j/k)^d + j/k`, increasing in `j/k`.
pub fn necessary_condition(params: &DimensionParams, j: &DirectedValue, k: &DirectedValue) -> DirectedValue {
    let d = params.d();
    let q = |c: f64| 2.0 * powi(c, d) + c;
    DirectedValue::from_bracket(q(j.lo() / k.hi()), q(j.hi() / k.lo()), 4.0 * f64::EPSILON)
}

/// `T₁(a) = (aK)^d K'/K`.
pub fn t1(point: &TwoBallPoint) -> Result<f64> {
    let (_, dk) = derivatives(point)?;
    Ok(powi(point.a * point.k_factor, point.params.d()) * dk / point.k_factor)
}

/// `G₁(a; k) = (aK' + K)(kK)^(d-1) g_ν(kKa)`.
pub fn g1(point: &TwoBallPoint, k: f64) -> Result<ExtendedReal> {
    let (_, dk) = derivatives(point)?;
    let kk = point.k_factor;
    let g = special::g_nu(&point.params, k * kk * point.a)?;
    Ok(scaled(g, (point.a * dk + kk) * powi(k * kk, point.params.d() - 1)))
}

/// `G₂(a) = k_pref^(d-1) g_ν(k_arg b(a))`. Defined at `a = 0` too.
pub fn g2(params: &DimensionParams, k_pref: f64, k_arg: f64, a: f64) -> Result<ExtendedReal> {
    let b = b_of_a(params, a)?;
    let g = special::g_nu(params, k_arg * b)?;
    Ok(scaled(g, powi(k_pref, params.d() - 1)))
}

/// `T₁`, `G₁`, `G₂` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdTerms {
    pub t1: f64,
    pub g1: ExtendedReal,
    pub g2: ExtendedReal,
}

/// `T₁`, `G₁` with `k_plus` throughout, and `G₂` with prefactor `k_minus`
/// and argument `k_plus`.
pub fn t1_g1_g2(point: &TwoBallPoint, k_plus: f64, k_minus: f64) -> Result<ThresholdTerms> {
    Ok(ThresholdTerms {
        t1: t1(point)?,
        g1: g1(point, k_plus)?,
        g2: g2(&point.params, k_minus, k_plus, point.a)?,
    })
}

/// `∂_a F_ν = 2k^d T₁ + T₂ + T₃`, valid where `F_ν(k, a) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeDecomposition {
    /// `2k^d T₁`.
    pub t1_term: f64,
    /// `T₂ = d K' K^(d-1) f_ν(kb)`.
    pub t2: f64,
    /// `T₃ = k [(aK'+K)(ρ_J - ρ_I)(kKa) - b'(ρ_J - ρ_I)(kb)] f_ν(kKa)`.
    pub t3: f64,
    pub total: f64,
}

/// Largest `|F_ν(k, a)|` accepted by [`df_da_decomposition`].
pub const CURVE_TOLERANCE: f64 = 1e-6;

pub fn df_da_decomposition(params: &DimensionParams, k: f64, a: f64) -> Result<DerivativeDecomposition> {
    let p = TwoBallPoint::new(params, a)?;
    let (db, dk) = derivatives(&p)?;
    let f_value = secular_at(&p, k)?.require_finite("df_da_decomposition", a)?;
    if f_value.abs() > CURVE_TOLERANCE {
        return Err(Error::Precondition {
            what: "df_da_decomposition: |F_nu(k, a)| <= 1e-6",
            value: f_value,
        });
    }
    let d = params.d();
    let nu = params.nu();
    let kk = p.k_factor;
    let inner = k * kk * p.a;
    let outer = k * p.b;
    let at = |x: f64| -> Result<(f64, f64)> {
        let f = special::f_nu(params, x)?.require_finite("f_nu", x)?;
        let diff = special::ratio_difference(nu, x)?.require_finite("ratio difference", x)?;
        Ok((f, diff))
    };
    let (f_in, diff_in) = at(inner)?;
    let (f_out, diff_out) = at(outer)?;
    let t1_term = 2.0 * powi(k, d) * t1(&p)?;
    let t2 = params.dim() * dk * powi(kk, d - 1) * f_out;
    let t3 = k * ((p.a * dk + kk) * diff_in - db * diff_out) * f_in;
    Ok(DerivativeDecomposition {
        t1_term,
        t2,
        t3,
        total: t1_term + t2 + t3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p4() -> DimensionParams {
        DimensionParams::new(4).unwrap()
    }

    #[test]
    fn b_endpoints_and_range() {
        let p = p4();
        assert_eq!(b_of_a(&p, 0.0).unwrap(), 1.0);
        assert_eq!(b_of_a(&p, 1.0).unwrap(), 0.0);
        assert!(b_of_a(&p, -0.01).is_err());
        assert!(b_of_a(&p, 1.01).is_err());
    }

    #[test]
    fn constraint_holds() {
        for d in [4, 7] {
            let p = DimensionParams::new(d).unwrap();
            for i in 1..100 {
                let a = i as f64 / 100.0;
                let b = b_of_a(&p, a).unwrap();
                assert!((powi(a, d) + powi(b, d) - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn general_factor_matches_constraint_form() {
        let p = p4();
        let pt = TwoBallPoint::new(&p, 0.6).unwrap();
        assert!((asymmetry_factor(&p, pt.a, pt.b) - pt.K()).abs() < 1e-15);
        assert_eq!(asymmetry_factor(&p, 1.0, 0.0), 1.0);
        assert_eq!(asymmetry_factor(&p, 0.0, 1.0), 0.0);
    }

    #[test]
    fn derivatives_reject_endpoints() {
        let p = p4();
        assert!(TwoBallPoint::new(&p, 0.0).unwrap().derivatives().is_err());
        assert!(TwoBallPoint::new(&p, 1.0).unwrap().derivatives().is_err());
    }

    #[test]
    fn secular_vanishes_at_origin() {
        let v = F_nu(&p4(), 4.6, 0.0).unwrap();
        assert_eq!(v.to_f64(), 0.0);
    }

    #[test]
    fn off_curve_guard() {
        let err = df_da_decomposition(&p4(), 2.0, 0.5).unwrap_err();
        assert!(matches!(err, Error::Precondition { .. }));
    }
}
