//! Command-line configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "PLATECERT_OUT_DIR";

/// Seed of the default rearrangement corpus.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Parser)]
#[command(name = "platecert", version, about = "Spectral constants, tables and certificates for the two-ball clamped-plate problem")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub output: OutputArgs,

    #[command(flatten)]
    pub tolerances: ToleranceArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file. Relative paths resolve against $PLATECERT_OUT_DIR when it
    /// is set. Without --out, output goes to $PLATECERT_OUT_DIR/<command>.<ext>
    /// if that is set and to stdout otherwise.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Significant digits of numbers in CSV output.
    #[arg(long, global = true, default_value_t = 17, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub digits: u8,

    #[arg(long = "out-dir", env = OUT_DIR_ENV, hide = true, global = true)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ToleranceArgs {
    /// Bisection width of the root enclosures.
    #[arg(long, global = true, default_value_t = 1e-12, value_parser = positive)]
    pub enclosure_width: f64,

    /// Relative inflation applied to every root enclosure.
    #[arg(long, global = true, default_value_t = 4e-10, value_parser = positive)]
    pub inflation: f64,

    /// Distance every certificate margin must keep from its threshold.
    #[arg(long, global = true, default_value_t = 1e-6, value_parser = positive)]
    pub margin_guard: f64,

    /// Simpson panels of the radial Poisson quadrature.
    #[arg(long, global = true, default_value_t = 4096, value_parser = clap::value_parser!(u32).range(4..))]
    pub panels: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Enclosures of j₁, j₂, k, a_I and a_S.
    Constants(DimsArg),
    /// Necessary condition 2(j/k)^d + j/k.
    Table1(DimsArg),
    /// Directed constants j⁻, k⁻, k⁺, a_I⁺, a_S⁻.
    Table2(DimsArg),
    /// Primed inequalities at the tabulated x₁, y₁.
    Table3(DimsArg),
    /// Zigzag certificates with every margin.
    Certify(CertifyArgs),
    /// μ(a, b(a)) along the constraint.
    MuCurve(CurveArgs),
    /// f_ν on (0, r_max].
    FCurve(FCurveArgs),
    /// Improved comparison κ²v ≥ u* on annuli.
    CompareAnnulus(CompareArgs),
    /// Rearrangement identities on a seeded corpus of step functions.
    PropSuite(PropArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Constants(_) => "constants",
            Command::Table1(_) => "table1",
            Command::Table2(_) => "table2",
            Command::Table3(_) => "table3",
            Command::Certify(_) => "certify",
            Command::MuCurve(_) => "mu-curve",
            Command::FCurve(_) => "f-curve",
            Command::CompareAnnulus(_) => "compare-annulus",
            Command::PropSuite(_) => "prop-suite",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct DimsArg {
    /// Dimensions: `4..9`, `4..=9`, `4,6,8` or a single value; each at least 4.
    #[arg(long, default_value = "4..9", value_parser = certified_dims)]
    pub dims: Dims,
}

#[derive(Debug, Clone, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub dims: DimsArg,

    /// Largest number of interior points per side.
    #[arg(long, default_value_t = 64, value_parser = count)]
    pub max_len: u32,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(4..))]
    pub dim: u32,

    /// Grid points, endpoints included.
    #[arg(long, default_value_t = 101, value_parser = count)]
    pub samples: u32,
}

#[derive(Debug, Clone, Args)]
pub struct FCurveArgs {
    #[command(flatten)]
    pub curve: CurveArgs,

    /// Right end of the range; defaults to the second zero of J_ν.
    #[arg(long, value_parser = positive)]
    pub r_max: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[arg(long, default_value = "4..6", value_parser = any_dims)]
    pub dims: Dims,

    /// Inner radii, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9", value_parser = positive)]
    pub r_in: Vec<f64>,

    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    pub r_out: f64,

    /// Largest accepted u* - κ²v.
    #[arg(long, default_value_t = 1e-6, value_parser = positive)]
    pub tolerance: f64,

    #[arg(long, default_value_t = 201, value_parser = clap::value_parser!(u32).range(2..))]
    pub grid_points: u32,
}

#[derive(Debug, Clone, Args)]
pub struct PropArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Number of random step functions.
    #[arg(long, default_value_t = 1000, value_parser = count)]
    pub count: u32,
}

/// A nonempty list of dimensions in the order given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dims(pub Vec<u32>);

fn parse_dims(s: &str, min: u32) -> Result<Dims, String> {
    let s = s.trim();
    let dims: Vec<u32> = if let Some((lo, hi)) = s.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let lo: u32 = lo.trim().parse().map_err(|_| format!("bad range start in `{s}`"))?;
        let hi: u32 = hi.trim().parse().map_err(|_| format!("bad range end in `{s}`"))?;
        if lo > hi {
            return Err(format!("empty range `{s}`"));
        }
        (lo..=hi).collect()
    } else {
        s.split(',')
            .map(|t| t.trim().parse().map_err(|_| format!("bad dimension `{t}`")))
            .collect::<Result<_, _>>()?
    };
    if dims.is_empty() {
        return Err("no dimensions".into());
    }
    if let Some(d) = dims.iter().find(|&&d| d < min || d > 64) {
        return Err(format!("dimension {d} outside {min}..=64"));
    }
    Ok(Dims(dims))
}

fn certified_dims(s: &str) -> Result<Dims, String> {
    parse_dims(s, 4)
}

fn any_dims(s: &str) -> Result<Dims, String> {
    parse_dims(s, 2)
}

fn count(s: &str) -> Result<u32, String> {
    match s.trim().parse::<u32>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("`{s}` is not a count of at least 1")),
    }
}

fn positive(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}
