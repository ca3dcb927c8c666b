//! Command-line flags, the optional JSON config file, and their merge.
//!
//! Precedence for every setting: flag (or `HSYM_SEED` for the seed), then
//! the config file, then the built-in default.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hsym::QuadratureSpec;
use serde::Deserialize;

use crate::CliError;

/// Seed used when neither `--seed`, `HSYM_SEED` nor the config file sets one.
pub const DEFAULT_SEED: u64 = 0x4853_594D;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "hsym", version, about = "Complete homogeneous symmetric polynomials of real and complex degree")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Seed for every randomized step (decimal or 0x-prefixed hex).
    #[arg(long, global = true, env = "HSYM_SEED", value_parser = parse_seed)]
    pub seed: Option<u64>,

    /// JSON file with default settings; unknown keys are rejected.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the B-spline density F(x; knots) on a uniform grid.
    Bspline(BsplineArgs),
    /// Evaluate h_z at a point tuple.
    Chs(ChsArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Decide positivity of a combination of h_j.
    Combo(ComboArgs),
    /// Length distributions in a numerical semigroup against their limit law.
    Semigroup(SemigroupArgs),
}

#[derive(Debug, Args)]
pub struct BsplineArgs {
    /// Comma-separated nondecreasing knots.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub knots: Vec<f64>,

    /// Number of grid points spanning [a_1, a_n], ends included.
    #[arg(long)]
    pub grid: Option<usize>,

    /// symmetric, truncated, determinant or recurrence; defaults to truncated
    /// for distinct knots and recurrence otherwise.
    #[arg(long)]
    pub form: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChsPath {
    Auto,
    Bialternant,
    Integral,
    Equal,
    Monomial,
    Recurrence,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ChsArgs {
    /// Real part of the degree.
    #[arg(long)]
    pub z: Option<f64>,

    /// Imaginary part of the degree.
    #[arg(long)]
    pub z_im: Option<f64>,

    /// Comma-separated points a_1, …, a_n.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub points: Vec<f64>,

    #[arg(long, value_enum, default_value_t = ChsPath::Auto)]
    pub path: ChsPath,

    /// Also evaluate through the integral representation and report the discrepancy.
    #[arg(long)]
    pub cross_check: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    /// theorem1, theorem2, hunter, prop2, ex1, ex2, peano or bspline.
    pub suite: String,

    #[arg(long)]
    pub samples: Option<usize>,

    #[arg(long)]
    pub n: Option<usize>,

    #[arg(long)]
    pub mu: Option<f64>,

    #[arg(long)]
    pub p: Option<u32>,

    #[arg(long)]
    pub q: Option<u32>,

    #[arg(long)]
    pub z_re: Option<f64>,

    #[arg(long)]
    pub z_im: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ComboArgs {
    /// JSON file: {"kind": "linear"|"product", "n": …, "c": […]}.
    #[arg(long)]
    pub file: PathBuf,

    /// `all`, or `r,s` with `-inf` / `inf` allowed.
    #[arg(long, allow_hyphen_values = true)]
    pub interval: Option<String>,

    /// Grid size per axis for the product search.
    #[arg(long)]
    pub grid: Option<usize>,

    /// Pattern-search iterations for the product search.
    #[arg(long)]
    pub refine: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SemigroupArgs {
    /// Comma-separated increasing generators with gcd 1.
    #[arg(long, value_delimiter = ',', required = true)]
    pub gens: Vec<u64>,

    /// A single semigroup element.
    #[arg(long, conflicts_with = "m_range")]
    pub m: Option<u64>,

    /// `start:end:step`, where a step such as `10x` multiplies instead of adding.
    #[arg(long)]
    pub m_range: Option<String>,

    /// Also emit the full length histograms.
    #[arg(long)]
    pub histogram: bool,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    }
    .map_err(|e| format!("invalid seed `{s}`: {e}"))
}

/// Contents of `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub samples: Option<usize>,
    pub n: Option<usize>,
    pub mu: Option<f64>,
    pub p: Option<u32>,
    pub q: Option<u32>,
    pub z_re: Option<f64>,
    pub z_im: Option<f64>,
    pub grid: Option<usize>,
    pub refine: Option<usize>,
    pub form: Option<String>,
    pub quadrature: Option<QuadratureSpec>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("invalid config {}: {e}", path.display())))?;
        if let Some(q) = &cfg.quadrature {
            q.validate()?;
        }
        Ok(cfg)
    }
}

/// Settings shared by every subcommand after merging.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub quadrature: QuadratureSpec,
}

impl RunConfig {
    pub fn merge(cli: &Cli, file: &FileConfig) -> Self {
        Self {
            seed: cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            format: cli.format.or(file.format).unwrap_or(Format::Csv),
            output: cli.output.clone().or_else(|| file.output.clone()),
            quadrature: file.quadrature.unwrap_or_default(),
        }
    }
}
