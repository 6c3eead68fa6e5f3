use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use radimp::{OutputFormat, RadiatorKind, Spacing};

/// Radiation impedance of clamped rectangular, long-strip and circular membranes.
#[derive(Debug, Parser)]
#[command(name = "radimp", version)]
pub struct Cli {
    /// Flat key=value file supplying defaults for any long flag (flags win).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Impedance over a ka grid, as CSV or JSON.
    Sweep(SweepArgs),
    /// Impedance at a single ka.
    Eval(EvalArgs),
    /// Compare the spectral result with the brute-force panel sum.
    OracleCheck(OracleArgs),
    /// Absolute relative error between a sampled velocity grid and the model profile.
    CompareProfile(ProfileArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Rect2d,
    Rect1d,
    Circ,
}

impl KindArg {
    pub fn radiator(self) -> RadiatorKind {
        match self {
            KindArg::Rect2d => RadiatorKind::Rect2D,
            KindArg::Rect1d => RadiatorKind::Rect1D,
            KindArg::Circ => RadiatorKind::Circular,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            KindArg::Rect2d => "rect2d",
            KindArg::Rect1d => "rect1d",
            KindArg::Circ => "circ",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpacingArg {
    Linear,
    Log,
}

impl From<SpacingArg> for Spacing {
    fn from(s: SpacingArg) -> Self {
        match s {
            SpacingArg::Linear => Spacing::Linear,
            SpacingArg::Log => Spacing::Log,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Args)]
pub struct RadiatorArgs {
    /// Radiator model [config: kind, default rect2d]
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Aspect ratio b/a, ignored for circ [config: aspect, default 1]
    #[arg(long)]
    pub aspect: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TolArgs {
    /// Relative integration tolerance [config: tol-rel, default 1e-6]
    #[arg(long)]
    pub tol_rel: Option<f64>,
    /// Absolute integration tolerance [config: tol-abs, default 1e-9]
    #[arg(long)]
    pub tol_abs: Option<f64>,
    /// Subdivision budget of each adaptive integral [config: max-subdivisions, default 1000]
    #[arg(long)]
    pub max_subdivisions: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub radiator: RadiatorArgs,
    /// Lower end of the ka range [config: ka-min, default 0.1]
    #[arg(long)]
    pub ka_min: Option<f64>,
    /// Upper end of the ka range [config: ka-max, default 10]
    #[arg(long)]
    pub ka_max: Option<f64>,
    /// Number of grid points [config: points, default 50]
    #[arg(long)]
    pub points: Option<usize>,
    /// Grid spacing [config: spacing, default linear]
    #[arg(long, value_enum)]
    pub spacing: Option<SpacingArg>,
    #[command(flatten)]
    pub tol: TolArgs,
    /// Output format [config: format, default csv]
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Write to FILE instead of standard output [config: out]
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub radiator: RadiatorArgs,
    /// Normalized frequency ka
    #[arg(long)]
    pub ka: Option<f64>,
    #[command(flatten)]
    pub tol: TolArgs,
    /// Output format [config: format, default csv]
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Write to FILE instead of standard output [config: out]
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub radiator: RadiatorArgs,
    /// Normalized frequency ka
    #[arg(long)]
    pub ka: Option<f64>,
    /// Panels across the width [config: mesh-n, default 64]
    #[arg(long)]
    pub mesh_n: Option<usize>,
    /// Largest accepted relative difference in r and x [config: max-rel, default 0.02]
    #[arg(long)]
    pub max_rel: Option<f64>,
    /// Rigid piston on a disk instead: compare the panel sum with 1 − J₁(2ka)/ka
    #[arg(long)]
    pub piston: bool,
    /// Combine meshes n/2 and n to cancel the first-order discretization error
    #[arg(long)]
    pub extrapolate: bool,
    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// CSV file with header x,y,v
    #[arg(long, value_name = "FILE")]
    pub grid: PathBuf,
    #[command(flatten)]
    pub radiator: RadiatorArgs,
    /// The file holds the quarter x ≥ 0, y ≥ 0; complete it by even reflection
    #[arg(long)]
    pub mirror: bool,
}
