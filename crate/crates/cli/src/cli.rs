use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use casimir_core::figures::{MAP_OMEGA, SLICE_X, Y_HALF_RANGE};
use casimir_core::imagesum::{DEFAULT_FD_STEP, DEFAULT_TERMS};
use casimir_core::units::DEFAULT_GUARD;

/// Ground-state field correlations between parallel conducting plates and
/// balanced homodyne detector predictions.
///
/// Frequencies are given as ω·a/c, lengths in units of the plate
/// separation a, times in units of a/c.
#[derive(Debug, Parser)]
#[command(name = "casimir", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Plate separation in micrometres (used for SI annotations only).
    #[arg(long, global = true, default_value_t = 1.0)]
    pub a_microns: f64,

    /// Symmetric image cutoff N.
    #[arg(long, global = true, default_value_t = DEFAULT_TERMS)]
    pub n_terms: usize,

    /// Average the last partial sums of each image series.
    #[arg(long, global = true)]
    pub accelerate: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Also draw the table as an SVG image.
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,

    /// JSON object whose keys mirror the long flags; flags given on the
    /// command line take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureName {
    #[value(name = "fig2-left")]
    Fig2Left,
    #[value(name = "fig2-right")]
    Fig2Right,
    #[value(name = "fig4-left")]
    Fig4Left,
    #[value(name = "fig4-right")]
    Fig4Right,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Diagonal density σ(ω, x, x) over x for one or more frequencies.
    SpectralDiag(SpectralDiagArgs),
    /// Off-diagonal density σ(ω, x, y) on an (x, y) grid.
    SpectralMap(SpectralMapArgs),
    /// σ(ω, x, y)/σ(ω, x, x) along y at fixed x.
    SpectralSlice(SpectralSliceArgs),
    /// Data for one of the standard plots.
    Figure(FigureArgs),
    /// Closed-form E_y E_y two-point function at time separation s.
    Twopoint(TwopointArgs),
    /// Mean, variance and balance of a balanced homodyne detector.
    Bhd(BhdArgs),
    /// Run the oracle cross-checks and invariant suites.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct SpectralDiagArgs {
    /// Frequencies, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub omega: Vec<f64>,

    /// Single distance from the first plate.
    #[arg(long, conflicts_with = "x_steps")]
    pub x: Option<f64>,

    /// Number of evenly spaced x values on [0, a].
    #[arg(long)]
    pub x_steps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SpectralMapArgs {
    #[arg(long, default_value_t = MAP_OMEGA)]
    pub omega: f64,

    #[arg(long, default_value_t = 41)]
    pub x_steps: usize,

    /// Transverse range as `min,max`.
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true,
          default_values_t = [-Y_HALF_RANGE, Y_HALF_RANGE])]
    pub y_range: Vec<f64>,

    #[arg(long, default_value_t = 101)]
    pub y_steps: usize,
}

#[derive(Debug, Args)]
pub struct SpectralSliceArgs {
    #[arg(long, default_value_t = SLICE_X)]
    pub x: f64,

    #[arg(long, default_value_t = MAP_OMEGA)]
    pub omega: f64,

    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true,
          default_values_t = [-Y_HALF_RANGE, Y_HALF_RANGE])]
    pub y_range: Vec<f64>,

    #[arg(long, default_value_t = 401)]
    pub y_steps: usize,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub name: FigureName,

    /// Override the number of frequencies (fig4-left, fig4-right).
    #[arg(long)]
    pub omega_steps: Option<usize>,

    /// Override the number of x values (fig2-left, fig4-left).
    #[arg(long)]
    pub x_steps: Option<usize>,

    /// Override the number of y values (fig2-left, fig2-right).
    #[arg(long)]
    pub y_steps: Option<usize>,

    /// Minimum distance of grid frequencies from multiples of π.
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    pub guard: f64,
}

#[derive(Debug, Args)]
pub struct TwopointArgs {
    /// Time separation.
    #[arg(long, allow_hyphen_values = true)]
    pub s: f64,

    #[arg(long)]
    pub x: f64,

    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub y: f64,

    /// Also evaluate by finite differences of the scalar image sums.
    #[arg(long)]
    pub derivative: bool,

    /// Finite-difference step.
    #[arg(long, default_value_t = DEFAULT_FD_STEP)]
    pub h: f64,
}

#[derive(Debug, Args)]
pub struct BhdArgs {
    /// LO centre frequency.
    #[arg(long, default_value_t = 2.0 * PI)]
    pub omega_lo: f64,

    /// Gaussian kernel width; defaults to omega_lo/100.
    #[arg(long)]
    pub width: Option<f64>,

    /// Peak of the kernel k(ω).
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,

    /// Detector calibration constant A(ω_LO).
    #[arg(long, default_value_t = 1.0)]
    pub calibration: f64,

    #[arg(long, default_value_t = 0.75)]
    pub x1: f64,

    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub y1: f64,

    #[arg(long, default_value_t = 0.75)]
    pub x2: f64,

    #[arg(long, allow_hyphen_values = true, default_value_t = 50.0)]
    pub y2: f64,

    /// Transverse wave number of the TE₁ LO mode; defaults to π/|y2 − y1|,
    /// which balances the two diodes.
    #[arg(long)]
    pub p: Option<f64>,

    /// Evaluate the mean current in the LO's own coherent state with this
    /// field strength instead of the ground state.
    #[arg(long)]
    pub lo_field_strength: Option<f64>,

    #[arg(long, default_value_t = 1e-9)]
    pub balance_tolerance: f64,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Skip the numerical Fourier-transform cross-check (the slowest part).
    #[arg(long)]
    pub skip_oracle: bool,
}
