use platecert::roots::{bessel_zero, ZeroSeries};
use platecert::special::*;
use platecert::DimensionParams;
use proptest::prelude::*;

fn params(d: u32) -> DimensionParams {
    DimensionParams::new(d).unwrap()
}

/// `f_ν(r) = 2r^d [1/d + 2r⁴ Σ 1/(j²(j⁴ - r⁴))]`, the Mittag-Leffler form
/// with the slowly converging part summed in closed form.
fn f_series(p: &DimensionParams, zeros: &ZeroSeries, r: f64) -> f64 {
    let r4 = r.powi(4);
    let mut sum = 0.0;
    for m in (1..=4000).rev() {
        let j2 = zeros.zero(m).powi(2);
        sum += 1.0 / (j2 * (j2 * j2 - r4));
    }
    2.0 * r.powi(p.d() as i32) * (1.0 / p.dim() + 2.0 * r4 * sum)
}

/// `J_{ν+1}/J_ν = 2r [1/(4(ν+1)) + r² Σ 1/(j²(j² - r²))]`.
fn ratio_series(nu: f64, zeros: &ZeroSeries, r: f64) -> f64 {
    let r2 = r * r;
    let mut sum = 0.0;
    for m in (1..=4000).rev() {
        let j2 = zeros.zero(m).powi(2);
        sum += 1.0 / (j2 * (j2 - r2));
    }
    2.0 * r * (1.0 / (4.0 * (nu + 1.0)) + r2 * sum)
}

#[test]
fn three_term_recurrence_j() {
    for twice_nu in 2..=7 {
        let nu = twice_nu as f64 / 2.0;
        for i in 1..300 {
            let r = i as f64 * 0.1;
            let (a, b, c) = (
                bessel_j(nu - 1.0, r).unwrap(),
                bessel_j(nu, r).unwrap(),
                bessel_j(nu + 1.0, r).unwrap(),
            );
            let residual = (a + c - 2.0 * nu / r * b).abs();
            assert!(residual <= 1e-10 * b.abs().max(1.0), "nu={nu} r={r} residual={residual}");
        }
    }
}

#[test]
fn three_term_recurrence_i() {
    for twice_nu in 2..=7 {
        let nu = twice_nu as f64 / 2.0;
        for i in 1..300 {
            let r = i as f64 * 0.1;
            let (a, b, c) = (
                bessel_i(nu - 1.0, r).unwrap(),
                bessel_i(nu, r).unwrap(),
                bessel_i(nu + 1.0, r).unwrap(),
            );
            let residual = (a - c - 2.0 * nu / r * b).abs();
            assert!(residual <= 1e-10 * b, "nu={nu} r={r} residual={residual}");
        }
    }
}

#[test]
fn half_order_closed_form() {
    for i in 1..500 {
        let r = i as f64 * 0.1;
        let exact = (2.0 / (std::f64::consts::PI * r)).sqrt() * r.sin();
        let got = bessel_j(0.5, r).unwrap();
        // Relative accuracy, measured against a floor near the zeros of sin.
        assert!((got - exact).abs() <= 1e-12 * exact.abs().max(1e-3), "r={r} {got} {exact}");
    }
}

#[test]
fn negative_arguments_are_domain_errors() {
    assert!(bessel_j(1.0, -1.0).is_err());
    assert!(bessel_i(1.0, -1.0).is_err());
    assert!(g_nu(&params(4), 0.0).is_err());
    assert!(s_nu(&params(4), -0.5).is_err());
}

#[test]
fn ratio_limits_and_monotonicity() {
    assert!(ratio_j(1.0, 1e-8).unwrap().to_f64().abs() < 1e-8);
    assert_eq!(ratio_i(1.0, 0.0).unwrap(), 0.0);
    assert!(ratio_i(1.0, 2.0).unwrap() < ratio_i(1.0, 3.0).unwrap());
    for i in 0..200 {
        let r = i as f64 * 0.25;
        let v = ratio_i(2.5, r).unwrap();
        assert!((0.0..1.0).contains(&v));
    }
}

#[test]
fn f_nu_increases_between_poles() {
    for d in 4..=9 {
        let p = params(d);
        let j1 = bessel_zero(p.nu(), 1).unwrap();
        let j2 = bessel_zero(p.nu(), 2).unwrap();
        for (lo, hi) in [(1e-3, j1.lo() - 1e-6), (j1.hi() + 1e-6, j2.lo() - 1e-6)] {
            let mut last = f64::NEG_INFINITY;
            for i in 0..=400 {
                let r = lo + (hi - lo) * i as f64 / 400.0;
                let v = f_nu(&p, r).unwrap().to_f64();
                assert!(v > last, "d={d} r={r}");
                last = v;
            }
        }
    }
}

#[test]
fn f_nu_series_agrees_with_ratio_form() {
    for d in [4, 5, 7, 9] {
        let p = params(d);
        let zeros = ZeroSeries::new(p.nu()).unwrap();
        let j1 = zeros.zero(1);
        for i in 1..50 {
            let r = j1 * i as f64 / 50.0;
            let a = f_nu(&p, r).unwrap().to_f64();
            let b = f_series(&p, &zeros, r);
            assert!((a - b).abs() <= 1e-9 * b.abs(), "d={d} r={r} {a} {b}");
        }
    }
}

#[test]
fn ratio_j_series_agrees() {
    for nu in [1.0, 1.5, 3.5] {
        let zeros = ZeroSeries::new(nu).unwrap();
        for i in 1..40 {
            let r = zeros.zero(1) * i as f64 / 40.0;
            let a = ratio_j(nu, r).unwrap().to_f64();
            let b = ratio_series(nu, &zeros, r);
            assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "nu={nu} r={r}");
        }
    }
}

#[test]
fn inverse_square_zero_sum() {
    // Σ 1/j² = 1/(4(ν+1)) = 1/(2d); the tail beyond M is below 1/(π²(M - 1/4)).
    for d in 4..=9 {
        let p = params(d);
        let zeros = ZeroSeries::new(p.nu()).unwrap();
        let m = 20_000;
        let partial: f64 = (1..=m).rev().map(|i| zeros.zero(i).powi(-2)).sum();
        let tail = ZeroSeries::gap_tail_bound(2, 0.0, m);
        let target = 1.0 / (2.0 * p.dim());
        assert!(partial < target && target <= partial + tail, "d={d} {partial} {tail}");
    }
}

#[test]
fn g_nu_matches_s_nu() {
    let p = params(4);
    let s = SNu::new(&p).unwrap();
    for r in [0.5, 1.0, 2.0, 3.0, 4.2, 4.6] {
        let g = g_nu(&p, r).unwrap().to_f64();
        let via_s = 4.0 * r.powi(4 - 4) * s.eval(r).unwrap().to_f64();
        assert!((g - via_s).abs() <= 1e-9 * g.abs().max(1e-3), "r={r} {g} {via_s}");
    }
    let rj = ratio_j(1.0, 1.0).unwrap().to_f64();
    let ri = ratio_i(1.0, 1.0).unwrap();
    assert!((4.0 * s.eval(1.0).unwrap().to_f64() - (rj - ri)).abs() <= 1e-9);
}

#[test]
fn g_nu_signs() {
    let p = params(4);
    assert!(g_nu(&p, 0.1).unwrap().to_f64() > 0.0);
    assert!(g_nu(&p, 4.2).unwrap().to_f64() < 0.0);
}

#[test]
fn s_nu_monotone_and_negative_at_k() {
    for d in [4, 6, 9] {
        let p = params(d);
        let s = SNu::new(&p).unwrap();
        let j = s.zeros().zero(1);
        let k = platecert::roots::k_nu(&p).unwrap();
        assert!(s.eval(k.lo()).unwrap().to_f64() < 0.0);
        assert!(s.eval(k.hi() + 1e-3).is_err());
        assert!(s.eval(j).unwrap().is_pole());
        for (lo, hi) in [(0.0, j - 1e-4), (j + 1e-4, k.lo())] {
            let mut last = f64::NEG_INFINITY;
            for i in 0..=100 {
                let v = s.eval(lo + (hi - lo) * i as f64 / 100.0).unwrap().to_f64();
                assert!(v > last);
                last = v;
            }
        }
    }
}

#[test]
fn f_nu_prime_matches_difference_quotient() {
    let p = params(4);
    let h = 1e-5;
    for r in [0.5, 2.0, 3.5, 4.2, 5.5] {
        let exact = f_nu_prime(&p, r).unwrap().to_f64();
        let fd = (f_nu(&p, r + h).unwrap().to_f64() - f_nu(&p, r - h).unwrap().to_f64()) / (2.0 * h);
        assert!((exact - fd).abs() <= 1e-6 * exact.abs(), "r={r} {exact} {fd}");
    }
}

#[test]
fn f_nu_prime_at_zero_and_k() {
    let p = params(4);
    let r = 1e-3;
    let v = f_nu_prime(&p, r).unwrap().to_f64();
    assert!((v / (2.0 * r.powi(3)) - 1.0).abs() < 1e-5);
    let k = platecert::roots::k_nu(&p).unwrap().mid();
    let v = f_nu_prime(&p, k).unwrap().to_f64();
    assert!((v - 2.0 * k.powi(3)).abs() <= 1e-6);
    assert!(f_nu(&p, k).unwrap().to_f64().abs() <= 1e-9);
}

#[test]
fn small_argument_asymptotics() {
    // (f_ν(r) - 2r^d/d)/r^(d+4) → 8 S_ν(0)/(d(d+4)); one Richardson step
    // removes the r⁴ correction.
    for d in [4, 5, 6] {
        let p = params(d);
        let q = |r: f64| (f_nu(&p, r).unwrap().to_f64() - 2.0 * r.powi(d as i32) / p.dim()) / r.powi(d as i32 + 4);
        let (r1, r2) = (0.4, 0.2);
        let limit = (16.0 * q(r2) - q(r1)) / 15.0;
        let s0 = s_nu(&p, 0.0).unwrap().to_f64();
        let expected = 8.0 / (p.dim() * (p.dim() + 4.0)) * s0;
        assert!((limit / expected - 1.0).abs() < 1e-5, "d={d} {limit} {expected}");
    }
}

#[test]
fn dimension_constants() {
    let p = params(3);
    assert!((p.omega_d() - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-15);
    // C_d = |∂B₁| / |B₁|^((d-1)/d) with |∂B₁| = d ω_d
    for d in 2..10 {
        let p = params(d);
        let expected = p.dim() * p.omega_d() / p.omega_d().powf((p.dim() - 1.0) / p.dim());
        assert!((p.c_d() - expected).abs() < 1e-13 * expected);
        assert_eq!(p.nu() * 2.0, (d - 2) as f64);
    }
    assert!(DimensionParams::new(1).is_err());
}

proptest! {
    #[test]
    fn ratios_match_value_quotients(twice_nu in 0u32..8, r in 0.05f64..30.0) {
        // J_{ν+1}/J_ν from the ratio routine equals the quotient of values
        // away from the zeros.
        let nu = twice_nu as f64 / 2.0;
        let jn = bessel_j(nu, r).unwrap();
        prop_assume!(jn.abs() > 1e-3);
        let q = bessel_j(nu + 1.0, r).unwrap() / jn;
        let rj = ratio_j(nu, r).unwrap().to_f64();
        prop_assert!((q - rj).abs() <= 1e-10 * q.abs().max(1.0));
        let qi = bessel_i(nu + 1.0, r).unwrap() / bessel_i(nu, r).unwrap();
        prop_assert!((qi - ratio_i(nu, r).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn bessel_i_positive(twice_nu in 0u32..8, r in 1e-3f64..40.0) {
        prop_assert!(bessel_i(twice_nu as f64 / 2.0, r).unwrap() > 0.0);
    }
}
