use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

/// Plan, sample, and verify pairs of negatively correlated gamma variates.
#[derive(Debug, Parser)]
#[command(name = "neggamma", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for construction parameters and print the plan as JSON.
    Plan(PlanArgs),
    /// Print the attainable correlation range as JSON.
    Bounds(BoundsArgs),
    /// Print the reference table of antithetic correlations as CSV.
    Table,
    /// Generate correlated pairs.
    Sample(SampleArgs),
    /// Generate pairs and check moments, correlation, and marginals.
    Verify(VerifyArgs),
    /// Evaluate the single-uniform joint density on a grid.
    Density(DensityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Nearest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BivariateArg {
    /// Conditional inversion.
    Inv,
    /// Acceptance-rejection.
    Ar,
}

#[derive(Debug, Clone, Args)]
pub struct TargetArgs {
    /// Shape of the first marginal.
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<f64>,
    /// Shape of the second marginal.
    #[arg(long, allow_negative_numbers = true)]
    pub n: Option<f64>,
    /// Target correlation, in (-1, 0).
    #[arg(long, allow_negative_numbers = true)]
    pub rho: Option<f64>,
    /// Method-1 solve mode.
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Args)]
pub struct PlanArgs {
    /// Construction: 1 (antithetic) or 2 (bivariate uniform).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub method: u8,
    #[command(flatten)]
    pub target: TargetArgs,
    /// Rate of both marginals.
    #[arg(long, default_value_t = 1.0)]
    pub rate: f64,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    /// Construction: 1 (antithetic) or 2 (bivariate uniform).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub method: u8,
    /// Shape of the first marginal.
    #[arg(long)]
    pub m: f64,
    /// Shape of the second marginal.
    #[arg(long)]
    pub n: f64,
}

#[derive(Debug, Clone, Args)]
pub struct StreamArgs {
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Substream id.
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    #[arg(long, value_enum, default_value_t = BivariateArg::Inv)]
    pub bivariate: BivariateArg,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    /// Construction: 1 (antithetic) or 2 (bivariate uniform).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub method: Option<u8>,
    /// Read the plan from a JSON file (`-` for stdin) instead of solving.
    #[arg(long, conflicts_with_all = ["m", "n", "rho"])]
    pub plan_file: Option<PathBuf>,
    #[command(flatten)]
    pub target: TargetArgs,
    /// Number of pairs.
    #[arg(long)]
    pub count: u64,
    #[command(flatten)]
    pub stream: StreamArgs,
    /// Override the plan's rate.
    #[arg(long)]
    pub rate: Option<f64>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Construction: 1 (antithetic) or 2 (bivariate uniform).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub method: u8,
    #[command(flatten)]
    pub target: TargetArgs,
    /// Number of pairs.
    #[arg(long)]
    pub count: u64,
    #[command(flatten)]
    pub stream: StreamArgs,
    /// Rate of both marginals.
    #[arg(long, default_value_t = 1.0)]
    pub rate: f64,
}

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    /// Shape of the shared shock.
    #[arg(long)]
    pub alpha0: f64,
    /// Largest y1 on the grid.
    #[arg(long = "y1-max")]
    pub y1_max: f64,
    /// Largest y2 on the grid.
    #[arg(long = "y2-max")]
    pub y2_max: f64,
    /// Grid spacing.
    #[arg(long)]
    pub step: f64,
}
