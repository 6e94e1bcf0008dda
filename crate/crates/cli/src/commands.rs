use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use platecert::certify::{self, SearchConfig};
use platecert::rearrange::{self, ComparisonConfig, PoissonConfig, StepFunction};
use platecert::roots::{RootTolerance, SpectralConstants};
use platecert::special::{self, DimensionParams};
use platecert::two_ball;
use platecert::ExtendedReal;

use crate::certificate::Certificate;
use crate::config::{Command, CompareArgs, CurveArgs, FCurveArgs, Format, PropArgs, RunConfig};
use crate::output::{self, Cell, Table};
use crate::{CliError, ExitStatus};

/// Output of one command: the table or document to write and whether every
/// verification it ran passed.
struct Report {
    body: Body,
    passed: bool,
}

enum Body {
    Table(Table),
    Certificates(Vec<Certificate>, Table),
}

impl Report {
    fn table(table: Table) -> Self {
        Self {
            body: Body::Table(table),
            passed: true,
        }
    }
}

pub fn run(config: &RunConfig) -> Result<ExitStatus, CliError> {
    let tol = RootTolerance {
        bisection: config.tolerances.enclosure_width,
        inflation: config.tolerances.inflation,
    };
    let report = match &config.command {
        Command::Constants(a) => Report::table(constants(&a.dims.0, &tol)?),
        Command::Table1(a) => Report::table(table1(&a.dims.0, &tol)?),
        Command::Table2(a) => Report::table(table2(&a.dims.0, &tol)?),
        Command::Table3(a) => Report::table(table3(&a.dims.0, &tol)?),
        Command::Certify(a) => {
            let search = SearchConfig {
                max_len: a.max_len as usize,
                guard: config.tolerances.margin_guard,
                ..SearchConfig::default()
            };
            certify(&a.dims.dims.0, &tol, &search)?
        }
        Command::MuCurve(a) => Report::table(mu_curve(a, &tol)?),
        Command::FCurve(a) => Report::table(f_curve(a, &tol)?),
        Command::CompareAnnulus(a) => compare_annulus(a, config.tolerances.panels as usize)?,
        Command::PropSuite(a) => prop_suite(a)?,
    };
    let out = &config.output;
    let bytes = match (&report.body, out.format) {
        (Body::Certificates(certs, _), Format::Json) => output::json_bytes(certs)?,
        (Body::Certificates(_, table), format) | (Body::Table(table), format) => {
            output::render(table, format, out.digits as usize)?
        }
    };
    output::emit(out, config.command.name(), &bytes)?;
    Ok(if report.passed {
        ExitStatus::Pass
    } else {
        ExitStatus::VerificationFailed
    })
}

fn params(d: u32) -> Result<DimensionParams, CliError> {
    Ok(DimensionParams::new(d)?)
}

fn spectral(d: u32, tol: &RootTolerance) -> Result<SpectralConstants, CliError> {
    Ok(SpectralConstants::compute_with(&params(d)?, tol)?)
}

fn constants(dims: &[u32], tol: &RootTolerance) -> Result<Table, CliError> {
    let mut t = Table::new(&[
        "d", "j1_lo", "j1_hi", "j2_lo", "j2_hi", "k_lo", "k_hi", "aI_lo", "aI_hi", "aS_lo", "aS_hi",
    ]);
    for &d in dims {
        let c = spectral(d, tol)?;
        let mut row: Vec<Cell> = vec![d.into()];
        for v in [&c.j1, &c.j2, &c.k, &c.a_i, &c.a_s] {
            row.push(v.lo().into());
            row.push(v.hi().into());
        }
        t.push(row);
    }
    Ok(t)
}

fn table1(dims: &[u32], tol: &RootTolerance) -> Result<Table, CliError> {
    let mut t = Table::new(&["d", "lo", "hi", "rounded"]);
    for &d in dims {
        let row = certify::table1_row(&spectral(d, tol)?);
        let v = row.value;
        t.push(vec![d.into(), v.lo().into(), v.hi().into(), format!("{:.4}", v.mid()).into()]);
    }
    Ok(t)
}

fn table2(dims: &[u32], tol: &RootTolerance) -> Result<Table, CliError> {
    let mut t = Table::new(&["d", "j_minus", "k_minus", "k_plus", "aI_plus", "aS_minus"]);
    for &d in dims {
        let r = certify::table2_row(&spectral(d, tol)?)?;
        t.push(vec![
            d.into(),
            r.j_minus.into(),
            r.k_minus.into(),
            r.k_plus.into(),
            r.a_i_plus.into(),
            r.a_s_minus.into(),
        ]);
    }
    Ok(t)
}

fn table3(dims: &[u32], tol: &RootTolerance) -> Result<Table, CliError> {
    let mut t = Table::new(&["d", "x1", "y1", "G_0", "F_1", "Fp_0", "Gp_1"]);
    for &d in dims {
        let r = certify::table3_row(&spectral(d, tol)?)?;
        t.push(vec![
            d.into(),
            r.x1.into(),
            r.y1.into(),
            r.g0.into(),
            r.f1.into(),
            r.fp0.into(),
            r.gp1.into(),
        ]);
    }
    Ok(t)
}

fn certify(dims: &[u32], tol: &RootTolerance, search: &SearchConfig) -> Result<Report, CliError> {
    let mut certs = Vec::with_capacity(dims.len());
    let mut t = Table::new(&["d", "margin", "value", "threshold", "passed"]);
    let mut passed = true;
    for &d in dims {
        let c = spectral(d, tol)?;
        let cert = match certify::zigzag_search_with(&c, search) {
            Ok(cert) => cert,
            Err(e @ platecert::Error::Exhausted { .. }) => {
                eprintln!("platecert: d={d}: {e}");
                passed = false;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        for m in &cert.margins {
            let (threshold, _) = m.id.requirement(cert.guard);
            t.push(vec![
                d.into(),
                m.id.to_string().into(),
                m.value.into(),
                threshold.into(),
                m.passed.into(),
            ]);
        }
        passed &= cert.verdict.is_pass();
        certs.push(Certificate::new(&cert, tol, search));
    }
    Ok(Report {
        body: Body::Certificates(certs, t),
        passed,
    })
}

/// `n` points from 0 to 1; a single point is 0.
fn unit_grid(n: u32) -> Vec<f64> {
    if n == 1 {
        vec![0.0]
    } else {
        rearrange::uniform_grid(0.0, 1.0, n as usize)
    }
}

fn mu_curve(a: &CurveArgs, tol: &RootTolerance) -> Result<Table, CliError> {
    let c = spectral(a.dim, tol)?;
    let mut t = Table::new(&["a", "b", "k_lo", "k_hi", "mu_lo", "mu_hi"]);
    for x in unit_grid(a.samples) {
        let k = c.k_of_a_with(x, tol)?;
        let mu = c.mu(x)?;
        let b = two_ball::b_of_a(&c.params, x)?;
        t.push(vec![x.into(), b.into(), k.lo().into(), k.hi().into(), mu.lo().into(), mu.hi().into()]);
    }
    Ok(t)
}

fn f_curve(a: &FCurveArgs, tol: &RootTolerance) -> Result<Table, CliError> {
    let p = params(a.curve.dim)?;
    let r_max = match a.r_max {
        Some(r) => r,
        None => spectral(a.curve.dim, tol)?.j2.lo(),
    };
    let n = a.curve.samples;
    let mut t = Table::new(&["r", "f_nu", "pole"]);
    for i in 1..=n {
        let r = r_max * i as f64 / n as f64;
        let (value, pole) = match special::f_nu(&p, r)? {
            ExtendedReal::Finite(v) => (Cell::Num(v), ""),
            pole if pole.signum() > 0.0 => (Cell::Empty, "+inf"),
            _ => (Cell::Empty, "-inf"),
        };
        t.push(vec![r.into(), value, pole.into()]);
    }
    Ok(t)
}

fn compare_annulus(a: &CompareArgs, panels: usize) -> Result<Report, CliError> {
    let cfg = ComparisonConfig {
        poisson: PoissonConfig {
            grid_points: a.grid_points as usize,
            panels,
        },
    };
    if let Some(&r) = a.r_in.iter().find(|&&r| r >= a.r_out) {
        return Err(CliError::Usage(format!("inner radius {r} is not below --r-out {}", a.r_out)));
    }
    let mut t = Table::new(&[
        "d", "r_in", "r_out", "kappa", "max_violation", "max_ratio", "quadrature_error", "passed",
    ]);
    let mut passed = true;
    for &d in &a.dims.0 {
        let p = params(d)?;
        for &r_in in &a.r_in {
            let rep = rearrange::verify_comparison(&p, r_in, a.r_out, &cfg)?;
            let ok = rep.max_violation <= a.tolerance;
            // u*/(κ²v) where v > 0; at most 1 when the comparison holds.
            let k2 = rep.kappa() * rep.kappa();
            let ratio = rep
                .u_star
                .iter()
                .zip(&rep.v)
                .filter(|(_, &v)| v > 0.0)
                .map(|(&u, &v)| u / (k2 * v))
                .fold(0.0, f64::max);
            passed &= ok;
            t.push(vec![
                d.into(),
                r_in.into(),
                a.r_out.into(),
                rep.kappa().into(),
                rep.max_violation.into(),
                ratio.into(),
                rep.quadrature_error.into(),
                ok.into(),
            ]);
        }
    }
    Ok(Report {
        body: Body::Table(t),
        passed,
    })
}

/// 1 to 12 cells with measures in multiples of 1/64 and values in multiples
/// of 1/8 within [-4, 4], so every sum below is exact.
fn dyadic_step_function(rng: &mut ChaCha8Rng) -> Result<StepFunction, CliError> {
    let n = rng.random_range(1..=12);
    let cells = (0..n)
        .map(|_| {
            let m = rng.random_range(1..=64) as f64 / 64.0;
            let v = rng.random_range(-32..=32) as f64 / 8.0;
            (m, v)
        })
        .collect();
    Ok(StepFunction::new(cells)?)
}

/// `sup |f - g|` over both layouts.
fn sup_difference(f: &StepFunction, g: &StepFunction) -> f64 {
    f.breakpoints()
        .into_iter()
        .chain(g.breakpoints())
        .map(|s| (f.value_at(s) - g.value_at(s)).abs())
        .fold(0.0, f64::max)
}

fn prop_suite(a: &PropArgs) -> Result<Report, CliError> {
    const CHECKS: [&str; 8] = [
        "equimeasurability",
        "permutation_invariance",
        "split_moment_p1",
        "split_moment_p2",
        "split_moment_p3",
        "dagger_equals_star",
        "hardy_littlewood",
        "moments_preserved",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut worst = [0.0f64; CHECKS.len()];
    for _ in 0..a.count {
        let f = dyadic_step_function(&mut rng)?;
        let star = rearrange::decreasing_rearrangement(&f);
        let levels = f.cells().iter().flat_map(|c| [c.1 - 0.0625, c.1]);
        for t in levels {
            let gap = (rearrange::distribution(&f, t) - rearrange::distribution(&star, t)).abs();
            worst[0] = worst[0].max(gap);
        }
        let mut cells = f.cells().to_vec();
        cells.shuffle(&mut rng);
        let g = StepFunction::new(cells)?;
        let perm = sup_difference(&rearrange::decreasing_rearrangement(&g), &star)
            .max(sup_difference(&rearrange::talenti_dagger(&g), &rearrange::talenti_dagger(&f)));
        worst[1] = worst[1].max(perm);
        let split: f64 = f.cells().iter().filter(|c| c.1 > 0.0).map(|c| c.0).sum();
        for p in 1..=3u32 {
            let res = rearrange::split_moment_identity(&f, split, p)?;
            worst[1 + p as usize] = worst[1 + p as usize].max(res);
        }
        worst[5] = worst[5].max(rearrange::check_dagger_equals_star(&f));
        let subset: Vec<usize> = (0..f.cells().len()).filter(|_| rng.random_bool(0.5)).collect();
        let hl = rearrange::hardy_littlewood_restriction(&f, &subset)?;
        let excess = hl.lhs.iter().zip(&hl.rhs).map(|(l, r)| l - r).fold(0.0, f64::max);
        worst[6] = worst[6].max(excess);
        for p in 1..=3 {
            worst[7] = worst[7].max((star.moment(p) - f.moment(p)).abs());
        }
    }
    let mut t = Table::new(&["check", "functions", "seed", "max_residual", "passed"]);
    for (name, &w) in CHECKS.iter().zip(&worst) {
        t.push(vec![(*name).into(), a.count.into(), Cell::Text(a.seed.to_string()), w.into(), (w == 0.0).into()]);
    }
    Ok(Report {
        passed: worst.iter().all(|&w| w == 0.0),
        body: Body::Table(t),
    })
}
