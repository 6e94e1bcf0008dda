//! Directed verification of the zigzag hypotheses and the table
//! reproductions.
//!
//! Each check evaluates the left-hand side of one inequality with directed
//! constants (`j⁻`, `k⁻`, `k⁺`, `a_I⁺`, `a_S⁻`). Where each endpoint goes:
//!
//! | quantity | `k` argument(s) | why |
//! |---|---|---|
//! | `F_{ν,i}` | `k⁺` in both `f_ν` | `F_ν` increases in `k` |
//! | `G_{ν,0}` | `k⁺` in `G̃₁` and in the `g_ν` argument of `G̃₂`, `k⁻` as the `G̃₂` prefactor | `g_ν(k b)` is negative increasing, so the prefactor is taken small |
//! | `F'_{ν,i}` | `k⁺` in both `f_ν` | as for `F_{ν,i}` |
//! | `G'_{ν,m}` | `k⁺` in `f_ν(kb)` and `g_ν(kb)`, `k⁻` inside `|g_ν(kKy)|` | the subtracted terms are bounded from above |
//! | `a_I⁺`, `a_S⁻` | from `j⁻/k⁺` | the chains must cover `[0, a_I]` and `[a_S, 1]` |

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::directed::DirectedValue;
use crate::error::{Error, Result};
use crate::roots::{self, SpectralConstants};
use crate::special::{self, powi, DimensionParams, ExtendedReal};
use crate::two_ball::{self, TwoBallPoint};

/// Every inequality must hold with at least this much room.
pub const MARGIN_GUARD: f64 = 1e-6;

/// Default cap on the length of each zigzag chain.
pub const DEFAULT_MAX_LEN: usize = 64;

/// How the directed constants are derived from the tight enclosures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    /// Use the enclosure endpoints as they are.
    Enclosure,
    /// Round outward to `spectral` decimals for `j`, `k` and to `threshold`
    /// decimals for `a_I`, `a_S`, the way the printed constants are.
    Decimals { spectral: u32, threshold: u32 },
}

impl Rounding {
    /// The convention of the printed tables: 3 decimals for `j⁻`, `k^±` and
    /// 4 for `a_I⁺`, `a_S⁻`.
    pub const PRINTED: Rounding = Rounding::Decimals {
        spectral: 3,
        threshold: 4,
    };
}

impl Default for Rounding {
    fn default() -> Self {
        Rounding::PRINTED
    }
}

/// One-sided constants fed to the checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectedConstants {
    pub params: DimensionParams,
    pub j_minus: f64,
    pub k_minus: f64,
    pub k_plus: f64,
    pub a_i_plus: f64,
    pub a_s_minus: f64,
    /// Tight enclosure of `j_{ν,1}`, used to keep searches off the poles.
    pub j: DirectedValue,
    pub rounding: Rounding,
}

fn floor_to(x: f64, places: u32) -> f64 {
    DirectedValue::exact(x).outward_decimals(places).lo()
}

fn ceil_to(x: f64, places: u32) -> f64 {
    DirectedValue::exact(x).outward_decimals(places).hi()
}

impl DirectedConstants {
    pub fn from_spectral(c: &SpectralConstants, rounding: Rounding) -> Result<Self> {
        let params = c.params;
        let (j_minus, k_minus, k_plus) = match rounding {
            Rounding::Enclosure => (c.j1.lo(), c.k.lo(), c.k.hi()),
            Rounding::Decimals { spectral, .. } => (
                floor_to(c.j1.lo(), spectral),
                floor_to(c.k.lo(), spectral),
                ceil_to(c.k.hi(), spectral),
            ),
        };
        let j = DirectedValue::exact(j_minus);
        let k = DirectedValue::exact(k_plus);
        let a_i = roots::a_i(&params, &j, &k).hi();
        let a_s = roots::a_s(&params, &j, &k)?.lo();
        let (a_i_plus, a_s_minus) = match rounding {
            Rounding::Enclosure => (a_i, a_s),
            Rounding::Decimals { threshold, .. } => (ceil_to(a_i, threshold), floor_to(a_s, threshold)),
        };
        Ok(Self {
            params,
            j_minus,
            k_minus,
            k_plus,
            a_i_plus,
            a_s_minus,
            j: c.j1,
            rounding,
        })
    }

    /// Largest `x` at which `f_ν(k⁺ b(x))` can still have its pole.
    fn x_pole(&self) -> f64 {
        let c = (self.j.hi() / self.k_plus).min(1.0);
        libm::pow(1.0 - powi(c, self.params.d()), 1.0 / self.params.dim())
    }

    /// Largest `y` at which `f_ν(k⁺ K(y) y)` can still have its pole.
    fn y_pole(&self) -> Result<f64> {
        let (_, hi) = roots::solve_a_k_a(&self.params, self.j.hi() / self.k_plus, 1e-14)?;
        Ok(hi)
    }
}

fn finite(v: ExtendedReal, what: &'static str, at: f64) -> Result<f64> {
    v.require_finite(what, at)
}

fn f_at(params: &DimensionParams, r: f64) -> Result<f64> {
    finite(special::f_nu(params, r)?, "f_nu", r)
}

fn g_at(params: &DimensionParams, r: f64) -> Result<f64> {
    finite(special::g_nu(params, r)?, "g_nu", r)
}

/// `F_{ν,i} = f_ν(k⁺K(x_{i+1})x_{i+1}) + K(x_i)^d f_ν(k⁺b(x_i))`; must be `≤ 0`.
#[allow(non_snake_case)]
pub fn check_F_primed(c: &DirectedConstants, x_i: f64, x_next: f64) -> Result<f64> {
    if !(0.0 <= x_i && x_i <= x_next && x_next <= 1.0) {
        return Err(Error::Domain {
            what: "check_F_primed (0 <= x_i <= x_next <= 1)",
            value: x_i,
        });
    }
    let p = &c.params;
    let upper = TwoBallPoint::new(p, x_next)?;
    let lower = TwoBallPoint::new(p, x_i)?;
    let first = f_at(p, c.k_plus * upper.k_factor * upper.a)?;
    if lower.k_factor == 0.0 {
        return Ok(first);
    }
    let second = f_at(p, c.k_plus * lower.b)?;
    Ok(first + powi(lower.k_factor, p.d()) * second)
}

/// `G_{ν,0} = G̃₁(x₁) + G̃₂(0)`; must be `≤ 0`.
#[allow(non_snake_case)]
pub fn check_G_primed_0(c: &DirectedConstants, x1: f64) -> Result<f64> {
    if !(x1 > 0.0 && x1 < 1.0) {
        return Err(Error::Domain {
            what: "check_G_primed_0 (0 < x1 < 1)",
            value: x1,
        });
    }
    let point = TwoBallPoint::new(&c.params, x1)?;
    let g1 = finite(two_ball::g1(&point, c.k_plus)?, "G1", x1)?;
    let g2 = finite(two_ball::g2(&c.params, c.k_minus, c.k_plus, 0.0)?, "G2", 0.0)?;
    Ok(g1 + g2)
}

/// `F'_{ν,i} = f_ν(k⁺K(y_{i+1})y_{i+1}) + f_ν(k⁺b(y_i))`; must be `≤ 0`.
#[allow(non_snake_case)]
pub fn check_Fprime_primed(c: &DirectedConstants, y_i: f64, y_next: f64) -> Result<f64> {
    if !(0.0 <= y_i && y_i <= y_next && y_next <= 1.0) {
        return Err(Error::Domain {
            what: "check_Fprime_primed (0 <= y_i <= y_next <= 1)",
            value: y_i,
        });
    }
    let p = &c.params;
    let upper = TwoBallPoint::new(p, y_next)?;
    let lower = TwoBallPoint::new(p, y_i)?;
    Ok(f_at(p, c.k_plus * upper.k_factor * upper.a)? + f_at(p, c.k_plus * lower.b)?)
}

/// `G'_{ν,m} = 2T₁(y) - f_ν(k⁺b)|g_ν(k⁻Ky)|((d-1)/y^d (1 + 1/b) + 1)
/// - f_ν(k⁺b) g_ν(k⁺b)`; must be `≥ 0`.
#[allow(non_snake_case)]
pub fn check_Gprime_primed(c: &DirectedConstants, y: f64) -> Result<f64> {
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::Domain {
            what: "check_Gprime_primed (0 < y < 1)",
            value: y,
        });
    }
    let p = &c.params;
    let point = TwoBallPoint::new(p, y)?;
    let b = point.b;
    let t1 = two_ball::t1(&point)?;
    let f_out = f_at(p, c.k_plus * b)?;
    let g_in = g_at(p, c.k_minus * point.k_factor * y)?;
    let g_out = g_at(p, c.k_plus * b)?;
    let bracket = (p.dim() - 1.0) / powi(y, p.d()) * (1.0 + 1.0 / b) + 1.0;
    Ok(2.0 * t1 - f_out * g_in.abs() * bracket - f_out * g_out)
}

/// Which inequality a margin belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MarginId {
    /// `F_{ν,i}`, `1 ≤ i ≤ n`.
    F(usize),
    G0,
    /// `F'_{ν,i}`, `0 ≤ i < m`.
    FPrime(usize),
    /// `G'_{ν,m}`.
    GPrime(usize),
    NecessaryCondition,
}

impl MarginId {
    /// Threshold the value has to clear, and whether it must lie above it.
    pub fn requirement(&self, guard: f64) -> (f64, bool) {
        match self {
            MarginId::F(_) | MarginId::G0 | MarginId::FPrime(_) => (-guard, false),
            MarginId::GPrime(_) => (guard, true),
            MarginId::NecessaryCondition => (1.0 + guard, true),
        }
    }

    pub fn passes(&self, value: f64, guard: f64) -> bool {
        let (threshold, above) = self.requirement(guard);
        if above {
            value >= threshold
        } else {
            value <= threshold
        }
    }
}

impl fmt::Display for MarginId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MarginId::F(i) => write!(f, "F_{i}"),
            MarginId::G0 => write!(f, "G_0"),
            MarginId::FPrime(i) => write!(f, "Fp_{i}"),
            MarginId::GPrime(i) => write!(f, "Gp_{i}"),
            MarginId::NecessaryCondition => write!(f, "necessary"),
        }
    }
}

impl core::str::FromStr for MarginId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = Error::Domain {
            what: "MarginId::from_str",
            value: f64::NAN,
        };
        let index = |rest: &str| rest.parse::<usize>().map_err(|_| bad.clone());
        if s == "G_0" {
            Ok(MarginId::G0)
        } else if s == "necessary" {
            Ok(MarginId::NecessaryCondition)
        } else if let Some(rest) = s.strip_prefix("Fp_") {
            Ok(MarginId::FPrime(index(rest)?))
        } else if let Some(rest) = s.strip_prefix("Gp_") {
            Ok(MarginId::GPrime(index(rest)?))
        } else if let Some(rest) = s.strip_prefix("F_") {
            Ok(MarginId::F(index(rest)?))
        } else {
            Err(bad)
        }
    }
}

/// Evaluated left-hand side of one inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margin {
    pub id: MarginId,
    pub value: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass,
    Fail(Vec<MarginId>),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// Sequences, margins and verdict for one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct ZigzagCertificate {
    pub params: DimensionParams,
    pub constants: SpectralConstants,
    pub directed: DirectedConstants,
    /// `0 = x₀ < x₁ < … < x_{n+1} = a_I⁺`.
    pub x_seq: Vec<f64>,
    /// `a_S⁻ = y₀ < … < y_{m+1} = 1`.
    pub y_seq: Vec<f64>,
    pub margins: Vec<Margin>,
    pub guard: f64,
    pub verdict: Verdict,
}

impl ZigzagCertificate {
    /// `n`, the number of interior points on the `x` side.
    pub fn n(&self) -> usize {
        self.x_seq.len().saturating_sub(2)
    }

    /// `m`, the number of interior points on the `y` side.
    pub fn m(&self) -> usize {
        self.y_seq.len().saturating_sub(2)
    }

    pub fn margin(&self, id: MarginId) -> Option<f64> {
        self.margins.iter().find(|m| m.id == id).map(|m| m.value)
    }
}

fn strictly_increasing(seq: &[f64]) -> bool {
    seq.windows(2).all(|w| w[0] < w[1])
}

/// Evaluates every inequality for the given chains.
///
/// `x_seq` must run from `0` to `a_I⁺` and `y_seq` from `a_S⁻` to `1`, both
/// strictly increasing with at least one interior point.
pub fn evaluate_sequences(
    constants: &SpectralConstants,
    directed: &DirectedConstants,
    x_seq: &[f64],
    y_seq: &[f64],
    guard: f64,
) -> Result<ZigzagCertificate> {
    let x_ok = x_seq.len() >= 3
        && x_seq[0] == 0.0
        && x_seq[x_seq.len() - 1] == directed.a_i_plus
        && strictly_increasing(x_seq);
    if !x_ok {
        return Err(Error::Precondition {
            what: "x sequence must increase strictly from 0 to a_I+",
            value: x_seq.len() as f64,
        });
    }
    let y_ok = y_seq.len() >= 3
        && y_seq[0] == directed.a_s_minus
        && y_seq[y_seq.len() - 1] == 1.0
        && strictly_increasing(y_seq);
    if !y_ok {
        return Err(Error::Precondition {
            what: "y sequence must increase strictly from a_S- to 1",
            value: y_seq.len() as f64,
        });
    }
    let mut values = Vec::new();
    let nc = two_ball::necessary_condition(&directed.params, &constants.j1, &constants.k);
    values.push((MarginId::NecessaryCondition, Ok(nc.lo())));
    values.push((MarginId::G0, check_G_primed_0(directed, x_seq[1])));
    for i in 1..x_seq.len() - 1 {
        values.push((MarginId::F(i), check_F_primed(directed, x_seq[i], x_seq[i + 1])));
    }
    let m = y_seq.len() - 2;
    for i in 0..m {
        values.push((MarginId::FPrime(i), check_Fprime_primed(directed, y_seq[i], y_seq[i + 1])));
    }
    values.push((MarginId::GPrime(m), check_Gprime_primed(directed, y_seq[m])));

    let mut margins = Vec::with_capacity(values.len());
    let mut failed = Vec::new();
    for (id, value) in values {
        // A pole inside an inequality is a failed inequality, not an abort.
        let value = match value {
            Ok(v) => v,
            Err(Error::Pole { .. }) => f64::NAN,
            Err(e) => return Err(e),
        };
        let passed = id.passes(value, guard);
        if !passed {
            failed.push(id);
        }
        margins.push(Margin { id, value, passed });
    }
    let verdict = if failed.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail(failed)
    };
    Ok(ZigzagCertificate {
        params: directed.params,
        constants: *constants,
        directed: *directed,
        x_seq: x_seq.to_vec(),
        y_seq: y_seq.to_vec(),
        margins,
        guard,
        verdict,
    })
}

/// Settings for [`zigzag_search_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub max_len: usize,
    pub guard: f64,
    /// Absolute bisection tolerance on each checkpoint.
    pub step_tolerance: f64,
    /// Distance kept from the pole of the first checkpoint.
    pub pole_offset: f64,
    pub rounding: Rounding,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_len: DEFAULT_MAX_LEN,
            guard: MARGIN_GUARD,
            step_tolerance: 1e-6,
            pole_offset: 1e-6,
            rounding: Rounding::PRINTED,
        }
    }
}

/// Greedy chain construction with the default settings and at most
/// `max_len` interior points per side.
pub fn zigzag_search(constants: &SpectralConstants, max_len: usize) -> Result<ZigzagCertificate> {
    zigzag_search_with(
        constants,
        &SearchConfig {
            max_len,
            ..SearchConfig::default()
        },
    )
}

fn passes_or_pole(value: Result<f64>, pass: impl Fn(f64) -> bool) -> Result<bool> {
    match value {
        Ok(v) => Ok(pass(v)),
        Err(Error::Pole { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

fn search_x(d: &DirectedConstants, cfg: &SearchConfig) -> Result<Vec<f64>> {
    let guard = cfg.guard;
    let mut chain = vec![d.a_i_plus];
    let mut upper = d.a_i_plus;
    let mut top = d.x_pole().min(upper) - cfg.pole_offset;
    let mut best = f64::INFINITY;
    for step in 0..cfg.max_len {
        let at_top = check_F_primed(d, top, upper)?;
        best = best.min(at_top);
        if !(at_top <= -guard) {
            return Err(Error::Exhausted {
                side: "x",
                steps: step,
                best_margin: best,
            });
        }
        // F_{ν,i} decreases in x_i; keep the passing end of the bracket.
        let (mut lo, mut hi) = (0.0, top);
        while hi - lo > cfg.step_tolerance {
            let mid = 0.5 * (lo + hi);
            if passes_or_pole(check_F_primed(d, mid, upper), |v| v <= -guard)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        chain.push(hi);
        if check_G_primed_0(d, hi)? <= -guard {
            chain.push(0.0);
            chain.reverse();
            return Ok(chain);
        }
        upper = hi;
        top = hi;
    }
    Err(Error::Exhausted {
        side: "x",
        steps: cfg.max_len,
        best_margin: best,
    })
}

fn search_y(d: &DirectedConstants, cfg: &SearchConfig) -> Result<Vec<f64>> {
    let guard = cfg.guard;
    let mut chain = vec![d.a_s_minus];
    let mut lower = d.a_s_minus;
    let mut bottom = d.y_pole()?.max(lower) + cfg.pole_offset;
    let mut best = f64::INFINITY;
    for step in 0..cfg.max_len {
        let at_bottom = check_Fprime_primed(d, lower, bottom)?;
        best = best.min(at_bottom);
        if !(at_bottom <= -guard) || bottom >= 1.0 {
            return Err(Error::Exhausted {
                side: "y",
                steps: step,
                best_margin: best,
            });
        }
        // F'_{ν,i} increases in y_{i+1}; keep the passing end.
        let (mut lo, mut hi) = (bottom, 1.0);
        while hi - lo > cfg.step_tolerance {
            let mid = 0.5 * (lo + hi);
            if passes_or_pole(check_Fprime_primed(d, lower, mid), |v| v <= -guard)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        chain.push(lo);
        if check_Gprime_primed(d, lo)? >= guard {
            chain.push(1.0);
            return Ok(chain);
        }
        lower = lo;
        bottom = lo;
    }
    Err(Error::Exhausted {
        side: "y",
        steps: cfg.max_len,
        best_margin: best,
    })
}

pub fn zigzag_search_with(constants: &SpectralConstants, cfg: &SearchConfig) -> Result<ZigzagCertificate> {
    if cfg.max_len == 0 {
        return Err(Error::Domain {
            what: "zigzag_search (max_len >= 1)",
            value: 0.0,
        });
    }
    let directed = DirectedConstants::from_spectral(constants, cfg.rounding)?;
    let x_seq = search_x(&directed, cfg)?;
    let y_seq = search_y(&directed, cfg)?;
    evaluate_sequences(constants, &directed, &x_seq, &y_seq, cfg.guard)
}

/// `x₁` used in the printed third table, by dimension.
pub fn table3_x1(d: u32) -> Option<f64> {
    match d {
        4 => Some(0.83),
        5 => Some(0.88),
        6 => Some(0.90),
        7 => Some(0.92),
        8 => Some(0.93),
        9 => Some(0.94),
        _ => None,
    }
}

/// `y₁` used in the printed third table.
pub const TABLE3_Y1: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Row {
    pub d: u32,
    /// Enclosure of `2(j/k)^d + j/k` from the tight constants.
    pub value: DirectedValue,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table2Row {
    pub d: u32,
    pub j_minus: f64,
    pub k_minus: f64,
    pub k_plus: f64,
    pub a_i_plus: f64,
    pub a_s_minus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table3Row {
    pub d: u32,
    pub x1: f64,
    pub y1: f64,
    pub g0: f64,
    pub f1: f64,
    pub fp0: f64,
    pub gp1: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Tables {
    pub table1: Vec<Table1Row>,
    pub table2: Vec<Table2Row>,
    pub table3: Vec<Table3Row>,
}

pub fn table1_row(c: &SpectralConstants) -> Table1Row {
    Table1Row {
        d: c.params.d(),
        value: two_ball::necessary_condition(&c.params, &c.j1, &c.k),
    }
}

pub fn table2_row(c: &SpectralConstants) -> Result<Table2Row> {
    let dc = DirectedConstants::from_spectral(c, Rounding::PRINTED)?;
    Ok(Table2Row {
        d: c.params.d(),
        j_minus: dc.j_minus,
        k_minus: dc.k_minus,
        k_plus: dc.k_plus,
        a_i_plus: dc.a_i_plus,
        a_s_minus: dc.a_s_minus,
    })
}

/// Third-table row at given `x₁`, `y₁` with `n = m = 1`.
pub fn table3_row_at(c: &SpectralConstants, x1: f64, y1: f64) -> Result<Table3Row> {
    let dc = DirectedConstants::from_spectral(c, Rounding::PRINTED)?;
    Ok(Table3Row {
        d: c.params.d(),
        x1,
        y1,
        g0: check_G_primed_0(&dc, x1)?,
        f1: check_F_primed(&dc, x1, dc.a_i_plus)?,
        fp0: check_Fprime_primed(&dc, dc.a_s_minus, y1)?,
        gp1: check_Gprime_primed(&dc, y1)?,
    })
}

/// Third-table row with the printed `x₁`, `y₁`; dimensions without a
/// printed choice take the first checkpoints of [`zigzag_search`].
pub fn table3_row(c: &SpectralConstants) -> Result<Table3Row> {
    match table3_x1(c.params.d()) {
        Some(x1) => table3_row_at(c, x1, TABLE3_Y1),
        None => {
            let cert = zigzag_search(c, DEFAULT_MAX_LEN)?;
            table3_row_at(c, cert.x_seq[1], cert.y_seq[1])
        }
    }
}

/// All three tables for the given dimensions (each `≥ 4`).
pub fn reproduce_tables(dims: &[u32]) -> Result<Tables> {
    if dims.is_empty() {
        return Err(Error::Domain {
            what: "reproduce_tables (nonempty dims)",
            value: 0.0,
        });
    }
    let mut tables = Tables::default();
    for &d in dims {
        if d < 4 {
            return Err(Error::Domain {
                what: "reproduce_tables (d >= 4)",
                value: d as f64,
            });
        }
        let c = SpectralConstants::compute(&DimensionParams::new(d)?)?;
        tables.table1.push(table1_row(&c));
        tables.table2.push(table2_row(&c)?);
        tables.table3.push(table3_row(&c)?);
    }
    Ok(tables)
}

/// One grid sample of `F_ν(k⁺, a)` that came out positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositiveSample {
    pub a: f64,
    pub value: f64,
    /// `F_ν(k⁻, a) ≤ 0`: the sign flips within the `k` enclosure, so the
    /// positive value comes from rounding `k` up.
    pub rounding_artifact: bool,
}

/// Non-rigorous sampling of `F_ν(k⁺, ·)` on `[0, x₁]` and `[y_m, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EndpointReport {
    pub max_left: f64,
    pub max_right: f64,
    pub samples: usize,
    pub positive: Vec<PositiveSample>,
}

impl EndpointReport {
    /// No positive sample other than rounding artifacts.
    pub fn clean(&self) -> bool {
        self.positive.iter().all(|p| p.rounding_artifact)
    }
}

/// Uniform points on `[lo, hi]` plus geometric clusters (ratio 1/2, 20
/// points) toward both ends.
pub fn clustered_grid(lo: f64, hi: f64, uniform: usize) -> Vec<f64> {
    let mut grid = Vec::with_capacity(uniform + 40);
    let n = uniform.max(2);
    for i in 0..n {
        grid.push(lo + (hi - lo) * i as f64 / (n - 1) as f64);
    }
    let mut h = 0.5 * (hi - lo) / (n - 1) as f64;
    for _ in 0..20 {
        grid.push(lo + h);
        grid.push(hi - h);
        h *= 0.5;
    }
    grid.sort_by(|a, b| a.total_cmp(b));
    grid.dedup();
    grid
}

pub fn sample_endpoint_sanity(
    d: &DirectedConstants,
    x1: f64,
    y_m: f64,
    grid_size: usize,
) -> Result<EndpointReport> {
    if grid_size < 16 {
        return Err(Error::Domain {
            what: "sample_endpoint_sanity (grid_size >= 16)",
            value: grid_size as f64,
        });
    }
    let mut report = EndpointReport {
        max_left: f64::NEG_INFINITY,
        max_right: f64::NEG_INFINITY,
        samples: 0,
        positive: Vec::new(),
    };
    for (left, lo, hi) in [(true, 0.0, x1), (false, y_m, 1.0)] {
        for a in clustered_grid(lo, hi, grid_size) {
            let value = two_ball::F_nu(&d.params, d.k_plus, a)?.to_f64();
            report.samples += 1;
            if left {
                report.max_left = report.max_left.max(value);
            } else {
                report.max_right = report.max_right.max(value);
            }
            if value > 0.0 {
                let lower = two_ball::F_nu(&d.params, d.k_minus, a)?.to_f64();
                report.positive.push(PositiveSample {
                    a,
                    value,
                    rounding_artifact: lower <= 0.0,
                });
            }
        }
    }
    Ok(report)
}
