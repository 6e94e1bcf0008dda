//! Rearrangements of step functions and the radial comparison check.
//!
//! A [`StepFunction`] is a measure/value histogram, which is all the
//! decreasing rearrangement `f*` and the signed rearrangement
//! `f†(s) = f₊*(s) - f₋*(|ω| - s)` depend on. Both are computed exactly on
//! the histogram: cell boundaries are sums of cell measures, so dyadic
//! measures give bit-exact results.
//!
//! The radial half solves `-Δv = f*` on the ball `ω*` by quadrature of
//!
//! ```text
//! v(ρ) = ∫_ρ^R F(ω_d t^d) / (d ω_d t^(d-1)) dt,   F(s) = ∫_0^s f*
//! ```
//!
//! and compares `κ²v` with the rearranged solution `u*` of `-Δu = f` on an
//! annulus.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::special::{powi, CompensatedSum, DimensionParams};

/// A function given by its histogram: cells of positive measure, each with
/// one value. Cell order only matters for [`hardy_littlewood_restriction`]
/// indices and for reading a rearrangement as a function of `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    cells: Vec<(f64, f64)>,
    total: f64,
}

impl StepFunction {
    pub fn new(cells: Vec<(f64, f64)>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::Domain {
                what: "StepFunction::new (at least one cell)",
                value: 0.0,
            });
        }
        let mut total = CompensatedSum::default();
        for &(m, v) in &cells {
            if !(m > 0.0) || !m.is_finite() || !v.is_finite() {
                return Err(Error::Domain {
                    what: "StepFunction::new (finite values, positive measures)",
                    value: m,
                });
            }
            total.add(m);
        }
        Ok(Self {
            cells,
            total: total.value(),
        })
    }

    /// Constant `value` on a set of measure `measure`.
    pub fn constant(measure: f64, value: f64) -> Result<Self> {
        Self::new(alloc::vec![(measure, value)])
    }

    pub fn cells(&self) -> &[(f64, f64)] {
        &self.cells
    }

    pub fn total_measure(&self) -> f64 {
        self.total
    }

    /// Value at `s` when the cells are laid out left to right on
    /// `[0, |ω|)`.
    pub fn value_at(&self, s: f64) -> f64 {
        let mut start = 0.0;
        for &(m, v) in &self.cells {
            if s < start + m {
                return v;
            }
            start += m;
        }
        self.cells[self.cells.len() - 1].1
    }

    /// Left endpoints of the cells in the left-to-right layout.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.cells.len());
        let mut start = 0.0;
        for &(m, _) in &self.cells {
            out.push(start);
            start += m;
        }
        out
    }

    /// `∫ f^p` over the whole set.
    pub fn moment(&self, p: u32) -> f64 {
        let mut sum = CompensatedSum::default();
        for &(m, v) in &self.cells {
            sum.add(m * powi(v, p));
        }
        sum.value()
    }

    /// `∫_0^x f^p` in the left-to-right layout.
    pub fn partial_moment(&self, x: f64, p: u32) -> f64 {
        let mut sum = CompensatedSum::default();
        let mut start = 0.0;
        for &(m, v) in &self.cells {
            if start >= x {
                break;
            }
            let width = m.min(x - start);
            sum.add(width * powi(v, p));
            start += m;
        }
        sum.value()
    }

    /// `-f`.
    pub fn negated(&self) -> Self {
        Self {
            cells: self.cells.iter().map(|&(m, v)| (m, -v)).collect(),
            total: self.total,
        }
    }

    /// Same histogram with its cells laid out in reverse order.
    pub fn reversed(&self) -> Self {
        let mut cells = self.cells.clone();
        cells.reverse();
        Self {
            cells,
            total: self.total,
        }
    }

    fn is_nonincreasing(&self) -> bool {
        self.cells.windows(2).all(|w| w[0].1 >= w[1].1)
    }
}

/// `μ_f(t) = |{f > t}|`.
pub fn distribution(f: &StepFunction, t: f64) -> f64 {
    let mut sum = CompensatedSum::default();
    for &(m, v) in &f.cells {
        if v > t {
            sum.add(m);
        }
    }
    sum.value()
}

/// Merges adjacent cells with equal values.
fn coalesce(cells: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(cells.len());
    for (m, v) in cells {
        match out.last_mut() {
            Some(last) if last.1 == v => last.0 += m,
            _ => out.push((m, v)),
        }
    }
    out
}

/// `f*` on `[0, |ω|)`: the cells sorted by value, largest first.
pub fn decreasing_rearrangement(f: &StepFunction) -> StepFunction {
    let mut cells = f.cells.clone();
    cells.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.total_cmp(&b.0)));
    StepFunction {
        cells: coalesce(cells),
        total: f.total,
    }
}

/// Pointwise combination of two layouts on `[0, |ω|)`; the result has a
/// cell for every piece of the common refinement.
fn combine(x: &[(f64, f64)], y: &[(f64, f64)], total: f64, op: impl Fn(f64, f64) -> f64) -> Vec<(f64, f64)> {
    let sliver = 4.0 * f64::EPSILON * total;
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    let (mut rx, mut ry) = (x.first().map_or(0.0, |c| c.0), y.first().map_or(0.0, |c| c.0));
    while i < x.len() && j < y.len() {
        let step = rx.min(ry);
        if step > sliver {
            out.push((step, op(x[i].1, y[j].1)));
        }
        rx -= step;
        ry -= step;
        if rx <= sliver {
            i += 1;
            if i < x.len() {
                rx += x[i].0;
            }
        }
        if ry <= sliver {
            j += 1;
            if j < y.len() {
                ry += y[j].0;
            }
        }
    }
    out
}

/// Pads a layout with a zero cell up to `total`.
fn padded(f: &StepFunction, total: f64) -> Vec<(f64, f64)> {
    let mut cells = f.cells.clone();
    let gap = total - f.total;
    if gap > 0.0 {
        cells.push((gap, 0.0));
    }
    cells
}

fn part(f: &StepFunction, positive: bool) -> Option<StepFunction> {
    let cells: Vec<(f64, f64)> = f
        .cells
        .iter()
        .filter(|c| if positive { c.1 > 0.0 } else { c.1 < 0.0 })
        .map(|&(m, v)| (m, v.abs()))
        .collect();
    StepFunction::new(cells).ok()
}

/// `f†(s) = f₊*(s) - f₋*(|ω| - s)`.
pub fn talenti_dagger(f: &StepFunction) -> StepFunction {
    let total = f.total;
    let zero = [(total, 0.0)];
    let plus = part(f, true).map(|p| padded(&decreasing_rearrangement(&p), total));
    // s ↦ f₋*(|ω| - s): the rearranged negative part, padded, read backwards.
    let minus = part(f, false).map(|m| {
        let mut cells = padded(&decreasing_rearrangement(&m), total);
        cells.reverse();
        cells
    });
    let plus = plus.as_deref().unwrap_or(&zero);
    let minus = minus.as_deref().unwrap_or(&zero);
    let cells = combine(plus, minus, total, |a, b| a - b);
    StepFunction {
        cells: coalesce(cells),
        total,
    }
}

/// `sup_s |f*(s) - f†(s)|` over the common refinement.
pub fn check_dagger_equals_star(f: &StepFunction) -> f64 {
    let star = decreasing_rearrangement(f);
    let dagger = talenti_dagger(f);
    combine(&star.cells, &dagger.cells, f.total, |a, b| (a - b).abs())
        .into_iter()
        .fold(0.0, |acc, (_, v)| acc.max(v))
}

/// Residual of `∫_{ω₊*} (f†)^p + (-1)^p ∫_{ω₋*} ((-f)†)^p = ∫_ω f^p` with
/// `|ω₊| = split`, `|ω₋| = |ω| - split`.
pub fn split_moment_identity(f: &StepFunction, split: f64, p: u32) -> Result<f64> {
    if !(0.0..=f.total).contains(&split) {
        return Err(Error::Domain {
            what: "split_moment_identity (0 <= split <= |omega|)",
            value: split,
        });
    }
    let plus = talenti_dagger(f).partial_moment(split, p);
    let minus = talenti_dagger(&f.negated()).partial_moment(f.total - split, p);
    let sign = if p.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(((plus + sign * minus) - f.moment(p)).abs())
}

/// Pointwise comparison of `(f|_A)*` with `f*` on `[0, |A|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HardyLittlewood {
    /// Left endpoints of the common refinement inside `[0, |A|)`.
    pub points: Vec<f64>,
    /// `(f|_A)*` at `points`.
    pub lhs: Vec<f64>,
    /// `f*` at `points`.
    pub rhs: Vec<f64>,
}

impl HardyLittlewood {
    pub fn holds(&self) -> bool {
        self.lhs.iter().zip(&self.rhs).all(|(l, r)| l <= r)
    }

    pub fn strict_somewhere(&self) -> bool {
        self.lhs.iter().zip(&self.rhs).any(|(l, r)| l < r)
    }
}

/// `A` is given by the indices of the cells of `f` it contains.
pub fn hardy_littlewood_restriction(f: &StepFunction, subset: &[usize]) -> Result<HardyLittlewood> {
    let mut cells = Vec::with_capacity(subset.len());
    for &i in subset {
        let cell = *f.cells.get(i).ok_or(Error::Domain {
            what: "hardy_littlewood_restriction (cell index)",
            value: i as f64,
        })?;
        cells.push(cell);
    }
    let mut out = HardyLittlewood {
        points: Vec::new(),
        lhs: Vec::new(),
        rhs: Vec::new(),
    };
    if cells.is_empty() {
        return Ok(out);
    }
    let restricted = decreasing_rearrangement(&StepFunction::new(cells)?);
    let star = decreasing_rearrangement(f);
    let pieces = combine(&restricted.cells, &star.cells, restricted.total, |a, _| a);
    let mut s = 0.0;
    for (m, lhs) in pieces {
        out.points.push(s);
        out.lhs.push(lhs);
        out.rhs.push(star.value_at(s));
        s += m;
    }
    Ok(out)
}

/// `κ` for a set `ω` of measure `omega_measure` with a hole of measure
/// `hole_measure`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoleGeometry {
    pub omega_measure: f64,
    pub hole_measure: f64,
    pub kappa: f64,
}

impl HoleGeometry {
    pub fn new(params: &DimensionParams, omega_measure: f64, hole_measure: f64) -> Result<Self> {
        if !(omega_measure > 0.0) || !(hole_measure >= 0.0) {
            return Err(Error::Domain {
                what: "HoleGeometry (|omega| > 0, |T| >= 0)",
                value: omega_measure.min(hole_measure),
            });
        }
        let e = (params.dim() - 1.0) / params.dim();
        let kappa = libm::pow(omega_measure, e)
            / (libm::pow(omega_measure + hole_measure, e) + libm::pow(hole_measure, e));
        Ok(Self {
            omega_measure,
            hole_measure,
            kappa,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialDomain {
    Ball { radius: f64 },
    Annulus { r_in: f64, r_out: f64 },
}

impl RadialDomain {
    pub fn extent(&self) -> (f64, f64) {
        match *self {
            RadialDomain::Ball { radius } => (0.0, radius),
            RadialDomain::Annulus { r_in, r_out } => (r_in, r_out),
        }
    }
}

/// Samples of a radial function on an increasing radius grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub domain: RadialDomain,
    pub params: DimensionParams,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

impl RadialProfile {
    pub fn new(domain: RadialDomain, params: DimensionParams, radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let (lo, hi) = domain.extent();
        let valid_domain = match domain {
            RadialDomain::Ball { radius } => radius > 0.0,
            RadialDomain::Annulus { r_in, r_out } => r_in > 0.0 && r_in < r_out,
        };
        let valid_grid = radii.len() >= 2
            && radii.len() == values.len()
            && radii.windows(2).all(|w| w[0] < w[1])
            && radii[0] == lo
            && radii[radii.len() - 1] == hi;
        if !valid_domain || !valid_grid {
            return Err(Error::Domain {
                what: "RadialProfile (increasing grid spanning the domain)",
                value: radii.len() as f64,
            });
        }
        Ok(Self {
            domain,
            params,
            radii,
            values,
        })
    }
}

/// `n` uniform points from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let mut g: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    g[n - 1] = hi;
    g
}

/// Discretization of [`radial_poisson`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PoissonConfig {
    pub grid_points: usize,
    /// Total Simpson panels over `[0, R]`.
    pub panels: usize,
}

impl Default for PoissonConfig {
    fn default() -> Self {
        Self {
            grid_points: 201,
            panels: 4096,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoissonSolution {
    pub profile: RadialProfile,
    /// Richardson estimate of the quadrature error, maximum over the grid.
    pub error_estimate: f64,
}

impl PoissonSolution {
    pub fn radius(&self) -> f64 {
        self.profile.domain.extent().1
    }
}

fn simpson(g: &impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels.max(2) + panels % 2;
    let h = (b - a) / n as f64;
    let mut sum = CompensatedSum::default();
    sum.add(g(a));
    sum.add(g(b));
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum.add(w * g(a + h * i as f64));
    }
    sum.value() * h / 3.0
}

/// Solves `-Δv = f*` on the ball of measure `omega_measure` with `v = 0` on
/// its boundary. `fstar` must be nonincreasing in its layout and cover
/// exactly `omega_measure`.
pub fn radial_poisson(
    fstar: &StepFunction,
    params: &DimensionParams,
    omega_measure: f64,
    config: &PoissonConfig,
) -> Result<PoissonSolution> {
    if !fstar.is_nonincreasing() {
        return Err(Error::Precondition {
            what: "radial_poisson: right-hand side must be nonincreasing",
            value: 0.0,
        });
    }
    if (fstar.total - omega_measure).abs() > 1e-12 * omega_measure || !(omega_measure > 0.0) {
        return Err(Error::Precondition {
            what: "radial_poisson: |omega| must match the measure of f*",
            value: fstar.total - omega_measure,
        });
    }
    if config.grid_points < 2 || config.panels < 4 {
        return Err(Error::Domain {
            what: "radial_poisson (grid_points >= 2, panels >= 4)",
            value: config.panels as f64,
        });
    }
    let d = params.d();
    let omega = params.omega_d();
    let radius = params.ball_radius(omega_measure);
    // Cumulative mass F at the cell boundaries.
    let mut starts = Vec::with_capacity(fstar.cells.len());
    let mut masses = Vec::with_capacity(fstar.cells.len());
    let (mut s, mut mass) = (0.0, 0.0);
    for &(m, v) in &fstar.cells {
        starts.push(s);
        masses.push(mass);
        s += m;
        mass += m * v;
    }
    let big_f = |x: f64| -> f64 {
        let idx = starts.partition_point(|&st| st <= x).saturating_sub(1);
        masses[idx] + fstar.cells[idx].1 * (x - starts[idx])
    };
    let integrand = |t: f64| -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        big_f(omega * powi(t, d)) / (params.dim() * omega * powi(t, d - 1))
    };

    let grid = uniform_grid(0.0, radius, config.grid_points);
    let mut knots: Vec<f64> = grid.clone();
    for &st in starts.iter().skip(1) {
        let r = params.ball_radius(st);
        if r > 0.0 && r < radius {
            knots.push(r);
        }
    }
    knots.sort_by(|a, b| a.total_cmp(b));
    knots.dedup();

    // Integrate from the outer boundary inward, once with the full panel
    // budget and once with half of it.
    let mut fine = Vec::with_capacity(knots.len());
    let mut coarse = Vec::with_capacity(knots.len());
    let (mut acc_fine, mut acc_coarse) = (CompensatedSum::default(), CompensatedSum::default());
    fine.push(0.0);
    coarse.push(0.0);
    for w in knots.windows(2).rev() {
        let (a, b) = (w[0], w[1]);
        let share = libm::ceil((b - a) / radius * config.panels as f64) as usize;
        let n = share.max(2).div_ceil(2) * 2;
        acc_fine.add(simpson(&integrand, a, b, 2 * n));
        acc_coarse.add(simpson(&integrand, a, b, n));
        fine.push(acc_fine.value());
        coarse.push(acc_coarse.value());
    }
    fine.reverse();
    coarse.reverse();

    let mut values = Vec::with_capacity(grid.len());
    let mut error: f64 = 0.0;
    let mut k = 0;
    for &r in &grid {
        while knots[k] < r {
            k += 1;
        }
        let richardson = (fine[k] - coarse[k]) / 15.0;
        values.push(fine[k] + richardson);
        error = error.max(richardson.abs());
    }
    Ok(PoissonSolution {
        profile: RadialProfile::new(RadialDomain::Ball { radius }, *params, grid, values)?,
        error_estimate: error,
    })
}

/// `u(r) = -f r²/(2d) + A + B φ(r)` with `φ = r^(2-d)` (`ln r` for `d = 2`),
/// the radial solution of `-Δu = f` vanishing on both spheres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusSolution {
    pub params: DimensionParams,
    pub r_in: f64,
    pub r_out: f64,
    pub source: f64,
    pub a: f64,
    pub b: f64,
}

fn phi(d: u32, r: f64) -> f64 {
    if d == 2 {
        libm::log(r)
    } else {
        1.0 / powi(r, d - 2)
    }
}

impl AnnulusSolution {
    pub fn eval(&self, r: f64) -> f64 {
        let d = self.params.d();
        -self.source * r * r / (2.0 * self.params.dim()) + self.a + self.b * phi(d, r)
    }

    pub fn derivative(&self, r: f64) -> f64 {
        let d = self.params.d();
        let dphi = if d == 2 {
            1.0 / r
        } else {
            (2.0 - self.params.dim()) / powi(r, d - 1)
        };
        -self.source * r / self.params.dim() + self.b * dphi
    }

    /// Radius of the interior maximum.
    pub fn argmax(&self) -> f64 {
        let dim = self.params.dim();
        if self.params.d() == 2 {
            libm::sqrt(2.0 * self.b / self.source)
        } else {
            libm::pow(dim * (2.0 - dim) * self.b / self.source, 1.0 / dim)
        }
    }

    pub fn max_value(&self) -> f64 {
        self.eval(self.argmax())
    }

    pub fn profile(&self, points: usize) -> Result<RadialProfile> {
        let radii = uniform_grid(self.r_in, self.r_out, points);
        let values = radii.iter().map(|&r| self.eval(r)).collect();
        RadialProfile::new(
            RadialDomain::Annulus {
                r_in: self.r_in,
                r_out: self.r_out,
            },
            self.params,
            radii,
            values,
        )
    }

    /// `|{u > t}|`.
    pub fn level_measure(&self, t: f64) -> Result<f64> {
        let omega = self.params.omega_d();
        let d = self.params.d();
        let full = omega * (powi(self.r_out, d) - powi(self.r_in, d));
        if t < 0.0 {
            return Ok(full);
        }
        let peak = self.argmax();
        if t >= self.eval(peak) {
            return Ok(0.0);
        }
        let root = |mut lo: f64, mut hi: f64, rising: bool| -> f64 {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if (self.eval(mid) > t) == rising {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        };
        let rho1 = root(self.r_in, peak, true);
        let rho2 = root(peak, self.r_out, false);
        Ok(omega * (powi(rho2, d) - powi(rho1, d)))
    }

    /// `u*(s)` for `s ∈ [0, |ω|]`.
    pub fn rearranged(&self, s: f64) -> Result<f64> {
        let top = self.max_value();
        if s <= 0.0 {
            return Ok(top);
        }
        let (mut lo, mut hi) = (0.0, top);
        if self.level_measure(0.0)? <= s {
            return Ok(0.0);
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.level_measure(mid)? > s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

pub fn annulus_solution(params: &DimensionParams, r_in: f64, r_out: f64, source: f64) -> Result<AnnulusSolution> {
    if !(r_in > 0.0 && r_in < r_out && r_out.is_finite()) {
        return Err(Error::Domain {
            what: "annulus_solution (0 < r_in < r_out)",
            value: r_in,
        });
    }
    if !(source > 0.0) {
        return Err(Error::Domain {
            what: "annulus_solution (f > 0)",
            value: source,
        });
    }
    let d = params.d();
    let dim = params.dim();
    let q = |r: f64| source * r * r / (2.0 * dim);
    let b = (q(r_out) - q(r_in)) / (phi(d, r_out) - phi(d, r_in));
    let a = q(r_out) - b * phi(d, r_out);
    Ok(AnnulusSolution {
        params: *params,
        r_in,
        r_out,
        source,
        a,
        b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComparisonConfig {
    pub poisson: PoissonConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub hole: HoleGeometry,
    /// `max (u* - κ²v)` over the grid.
    pub max_violation: f64,
    /// `min (v - κ²v)` over the grid; never negative.
    pub improvement: f64,
    pub quadrature_error: f64,
    pub radii: Vec<f64>,
    pub u_star: Vec<f64>,
    pub v: Vec<f64>,
}

impl ComparisonReport {
    pub fn kappa(&self) -> f64 {
        self.hole.kappa
    }
}

/// `κ²v ≥ u*` on the grid for `-Δu = 1` on the annulus `r_in < |x| < r_out`.
pub fn verify_comparison(
    params: &DimensionParams,
    r_in: f64,
    r_out: f64,
    config: &ComparisonConfig,
) -> Result<ComparisonReport> {
    let u = annulus_solution(params, r_in, r_out, 1.0)?;
    let omega_measure = params.ball_measure(r_out) - params.ball_measure(r_in);
    let hole = HoleGeometry::new(params, omega_measure, params.ball_measure(r_in))?;
    let fstar = StepFunction::constant(omega_measure, 1.0)?;
    let v = radial_poisson(&fstar, params, omega_measure, &config.poisson)?;
    let k2 = hole.kappa * hole.kappa;
    let mut report = ComparisonReport {
        hole,
        max_violation: f64::NEG_INFINITY,
        improvement: f64::INFINITY,
        quadrature_error: v.error_estimate,
        radii: v.profile.radii.clone(),
        u_star: Vec::with_capacity(v.profile.radii.len()),
        v: v.profile.values.clone(),
    };
    for (&r, &vr) in v.profile.radii.iter().zip(&v.profile.values) {
        let us = u.rearranged(params.ball_measure(r))?;
        report.max_violation = report.max_violation.max(us - k2 * vr);
        report.improvement = report.improvement.min(vr - k2 * vr);
        report.u_star.push(us);
    }
    Ok(report)
}
