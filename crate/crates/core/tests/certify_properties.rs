use platecert::certify::*;
use platecert::roots::{RootTolerance, SpectralConstants};
use platecert::{DimensionParams, Error};

fn constants(d: u32) -> SpectralConstants {
    SpectralConstants::compute(&DimensionParams::new(d).unwrap()).unwrap()
}

fn directed(d: u32) -> DirectedConstants {
    DirectedConstants::from_spectral(&constants(d), Rounding::PRINTED).unwrap()
}

const PRINTED_TABLE3: [(u32, [f64; 4]); 6] = [
    (4, [-1.232, -6.234, -2.682, 26.92]),
    (5, [-1.040, -76.82, -52.58, 27.50]),
    (6, [-0.9603, -123.8, -840.3, 28.84]),
    (7, [-0.8131, -1135.0, -13360.0, 30.36]),
    (8, [-0.7514, -3126.0, -216500.0, 31.83]),
    (9, [-0.6430, -23620.0, -3803000.0, 33.12]),
];

#[test]
fn table3_examples() {
    let d4 = directed(4);
    assert!((check_F_primed(&d4, 0.83, d4.a_i_plus).unwrap() / -6.234 - 1.0).abs() < 1e-3);
    assert!((check_G_primed_0(&d4, 0.83).unwrap() / -1.232 - 1.0).abs() < 1e-3);
    assert!((check_Fprime_primed(&d4, d4.a_s_minus, 0.999).unwrap() / -2.682 - 1.0).abs() < 1e-3);
    assert!((check_Gprime_primed(&d4, 0.999).unwrap() / 26.92 - 1.0).abs() < 1e-3);
    let d6 = directed(6);
    assert!((check_G_primed_0(&d6, 0.90).unwrap() / -0.9603 - 1.0).abs() < 1e-3);
    let d9 = directed(9);
    assert!((check_F_primed(&d9, 0.94, d9.a_i_plus).unwrap() / -23620.0 - 1.0).abs() < 1e-3);
    assert!((check_Gprime_primed(&d9, 0.999).unwrap() / 33.12 - 1.0).abs() < 1e-3);
}

#[test]
fn table3_every_entry() {
    let tables = reproduce_tables(&[4, 5, 6, 7, 8, 9]).unwrap();
    for (row, (d, printed)) in tables.table3.iter().zip(PRINTED_TABLE3) {
        assert_eq!(row.d, d);
        for (got, want) in [row.g0, row.f1, row.fp0, row.gp1].into_iter().zip(printed) {
            assert!((got / want - 1.0).abs() < 1e-3, "d={d} {got} {want}");
        }
    }
}

#[test]
fn g_prime_margin_grows_with_dimension() {
    let mut last = 0.0;
    for d in 4..=9 {
        let v = check_Gprime_primed(&directed(d), 0.999).unwrap();
        assert!(v > last);
        last = v;
    }
}

#[test]
fn f_prime_degenerate_interval() {
    // y_i = y_{i+1} = 1 reduces the check to f_ν(k⁺) + f_ν(0) = f_ν(k⁺) > 0.
    let d = directed(4);
    let v = check_Fprime_primed(&d, 1.0, 1.0).unwrap();
    let f = platecert::special::f_nu(&d.params, d.k_plus).unwrap().to_f64();
    assert_eq!(v, f);
    assert!(v > 0.0);
}

#[test]
fn search_finds_single_step_chains() {
    for d in 4..=9 {
        let cert = zigzag_search(&constants(d), DEFAULT_MAX_LEN).unwrap();
        assert!(cert.verdict.is_pass(), "d={d} {:?}", cert.verdict);
        assert_eq!((cert.n(), cert.m()), (1, 1), "d={d}");
        assert_eq!(cert.x_seq[0], 0.0);
        assert_eq!(*cert.x_seq.last().unwrap(), cert.directed.a_i_plus);
        assert_eq!(cert.y_seq[0], cert.directed.a_s_minus);
        assert_eq!(*cert.y_seq.last().unwrap(), 1.0);
        for m in &cert.margins {
            assert!(m.id.passes(m.value, MARGIN_GUARD), "d={d} {:?}", m);
        }
        assert!(cert.margin(MarginId::NecessaryCondition).unwrap() > 1.0);
    }
}

#[test]
fn search_with_enclosure_constants() {
    let cfg = SearchConfig {
        rounding: Rounding::Enclosure,
        ..SearchConfig::default()
    };
    for d in 4..=9 {
        let cert = zigzag_search_with(&constants(d), &cfg).unwrap();
        assert!(cert.verdict.is_pass(), "d={d}");
    }
}

#[test]
fn certificates_survive_tighter_constants() {
    for d in 4..=9 {
        let cert = zigzag_search(&constants(d), DEFAULT_MAX_LEN).unwrap();
        let p = DimensionParams::new(d).unwrap();
        let tight = SpectralConstants::compute_with(&p, &RootTolerance::default().tighter(10.0)).unwrap();
        let dc = DirectedConstants::from_spectral(&tight, Rounding::PRINTED).unwrap();
        let again = evaluate_sequences(&tight, &dc, &cert.x_seq, &cert.y_seq, MARGIN_GUARD).unwrap();
        assert!(again.verdict.is_pass());
        for (a, b) in cert.margins.iter().zip(&again.margins) {
            assert!((a.value - b.value).abs() < MARGIN_GUARD, "d={d} {:?} {:?}", a, b);
        }
    }
}

#[test]
fn f_margin_is_monotone_in_the_interval() {
    let d = directed(5);
    let base = check_F_primed(&d, 0.87, 0.88).unwrap();
    let wider_right = check_F_primed(&d, 0.87, 0.885).unwrap();
    let wider_left = check_F_primed(&d, 0.86, 0.88).unwrap();
    assert!(wider_right >= base && wider_left >= base);
    for i in 0..20 {
        let x = 0.5 + 0.02 * i as f64;
        let a = check_F_primed(&d, x, d.a_i_plus).unwrap();
        let b = check_F_primed(&d, x - 0.01, d.a_i_plus).unwrap();
        assert!(b >= a);
    }
}

#[test]
fn failing_chain_is_reported() {
    let c = constants(4);
    let dc = DirectedConstants::from_spectral(&c, Rounding::PRINTED).unwrap();
    // x₁ = 0.3 leaves [x₁, a_I⁺] too wide for F_{ν,1}.
    let cert = evaluate_sequences(&c, &dc, &[0.0, 0.3, dc.a_i_plus], &[dc.a_s_minus, 0.999, 1.0], MARGIN_GUARD).unwrap();
    match cert.verdict {
        Verdict::Fail(ids) => assert_eq!(ids, vec![MarginId::F(1)]),
        Verdict::Pass => panic!("expected failure"),
    }
}

#[test]
fn malformed_chains_are_rejected() {
    let c = constants(4);
    let dc = DirectedConstants::from_spectral(&c, Rounding::PRINTED).unwrap();
    let y = [dc.a_s_minus, 0.999, 1.0];
    assert!(evaluate_sequences(&c, &dc, &[0.0, dc.a_i_plus], &y, MARGIN_GUARD).is_err());
    assert!(evaluate_sequences(&c, &dc, &[0.1, 0.5, dc.a_i_plus], &y, MARGIN_GUARD).is_err());
    assert!(evaluate_sequences(&c, &dc, &[0.0, 0.6, 0.5, dc.a_i_plus], &y, MARGIN_GUARD).is_err());
    let x = [0.0, 0.83, dc.a_i_plus];
    assert!(evaluate_sequences(&c, &dc, &x, &[dc.a_s_minus, 0.999], MARGIN_GUARD).is_err());
}

#[test]
fn empty_chain_length_is_an_error() {
    assert!(matches!(zigzag_search(&constants(4), 0), Err(Error::Domain { .. })));
}

#[test]
fn endpoint_sampling() {
    let c = constants(4);
    let dc = DirectedConstants::from_spectral(&c, Rounding::PRINTED).unwrap();
    let report = sample_endpoint_sanity(&dc, 0.83, 0.999, 64).unwrap();
    assert!(report.clean(), "{:?}", report.positive);
    assert!(report.samples > 128);
    // The sample at a = 1 is f_ν(k⁺) > 0 and is classified as rounding.
    assert!(report.positive.iter().any(|p| p.a == 1.0 && p.rounding_artifact));
    assert!(report.max_left >= 0.0);
    assert!(sample_endpoint_sanity(&dc, 0.83, 0.999, 8).is_err());
}

#[test]
fn printed_rows() {
    let tables = reproduce_tables(&[5, 7]).unwrap();
    assert_eq!((tables.table1[0].value.mid() * 1e4).round() / 1e4, 1.7563);
    let r = tables.table2[1];
    assert_eq!((r.j_minus, r.k_minus, r.k_plus, r.a_i_plus, r.a_s_minus), (5.763, 6.529, 6.530, 0.9259, 0.9927));
    assert!(reproduce_tables(&[]).is_err());
    assert!(reproduce_tables(&[3]).is_err());
}
