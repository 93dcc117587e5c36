use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "comprat", version, about = "Composite rational approximants to x^(1/p) and the p-sector function")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Error curve ftilde_k(x) - x^(1/p) on an equispaced grid over [0, 1].
    Approx(ApproxArgs),
    /// Balanced error history over a range of k, with fits.
    Study(StudyArgs),
    /// |gtilde_k(r) - 1| along one ray of the p-sector, r in [alpha, 1].
    Sector(SectorArgs),
    /// Apply ftilde_k to a symmetric matrix with spectrum in [0, 1].
    Matrix(MatrixArgs),
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Significand bits of the working precision.
    #[arg(long, env = "COMPRAT_PRECISION_BITS", default_value_t = 256)]
    pub precision_bits: u32,
    /// Grid size of scans and of the emitted curve.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Seed for randomized inputs.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// How `alpha` is chosen. At most one may be given; the default is `--balance`.
#[derive(Debug, Args, Clone)]
#[group(multiple = false)]
pub struct AlphaMode {
    /// Use this alpha in (0, 1).
    #[arg(long)]
    pub alpha: Option<String>,
    /// Target accuracy: alpha = eps / 2 and, without --k, the smallest k reaching eps.
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Solve 2 alpha = (1 - alpha_k) / (1 + alpha_k) for alpha.
    #[arg(long)]
    pub balance: bool,
}

#[derive(Debug, Args)]
pub struct ApproxArgs {
    /// Root order, at least 2.
    #[arg(long)]
    pub p: u32,
    /// Number of recursion steps.
    #[arg(long)]
    pub k: Option<usize>,
    #[command(flatten)]
    pub mode: AlphaMode,
    /// Relative tolerance of the balancing bisection.
    #[arg(long, default_value_t = 1e-6)]
    pub rel_tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct StudyArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub k_min: usize,
    #[arg(long)]
    pub k_max: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SectorArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub k: usize,
    /// Start value alpha0; also the inner radius of the scanned segment.
    #[arg(long)]
    pub alpha: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub k: usize,
    #[command(flatten)]
    pub mode: AlphaMode,
    #[arg(long, default_value_t = 1e-6)]
    pub rel_tol: f64,
    /// Matrix file: `n`, then n rows of n numbers.
    #[arg(long, conflicts_with = "random")]
    pub input: Option<PathBuf>,
    /// Generate a random n x n symmetric matrix with spectrum in [0, 1] from --seed.
    #[arg(long, required_unless_present = "input")]
    pub random: Option<usize>,
    /// Where to write the residual report; stderr when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}
