use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "mprisk",
    version,
    about = "Magnitude-propensity risk: the closest two-point law {0, m} to a loss distribution"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve (m, p) for one distribution or sample.
    Solve(SolveArgs),
    /// Solve (m, p) along a range of one family parameter.
    Sweep(SweepArgs),
    /// Solve, then check second-order sufficiency and uniqueness.
    Diagnose(SolveArgs),
    /// Tabulate mean, (m, p), VaR and ES for several risks.
    Compare(CompareArgs),
    /// List the registered solvers.
    Methods,
}

/// A parametric family from flags, or a CSV sample.
#[derive(Debug, Args, Clone)]
pub struct DistArgs {
    /// Family: uniform, exponential, pareto, gamma or weibull.
    #[arg(long, conflicts_with = "data")]
    pub dist: Option<String>,
    /// Uniform upper bound.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Exponential rate.
    #[arg(long, visible_alias = "rate", allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Pareto tail index (must exceed 2).
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Gamma or Weibull shape.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Gamma or Weibull scale.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// CSV file of losses.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Column holding the losses, by header name or zero-based index.
    #[arg(long, default_value = "0")]
    pub column: String,
    /// Divide every loss by this positive number.
    #[arg(long, allow_negative_numbers = true)]
    pub scale: Option<f64>,
}

impl DistArgs {
    pub fn family_flags(&self) -> Vec<(&'static str, f64)> {
        [
            ("a", self.a),
            ("lambda", self.lambda),
            ("theta", self.theta),
            ("alpha", self.alpha),
            ("beta", self.beta),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k, v)))
        .collect()
    }
}

#[derive(Debug, Args, Clone)]
pub struct SolverArgs {
    /// Solver name; see `mprisk methods`.
    #[arg(long, default_value = "auto")]
    pub method: String,
    /// Fixed-point tolerance. Overrides MP_SOLVER_TOL.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Initial threshold a; defaults to the mean.
    #[arg(long, allow_negative_numbers = true)]
    pub init: Option<f64>,
    /// Grid size of the minimization scan.
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Upper end of the scan as a quantile level.
    #[arg(long)]
    pub bracket_quantile: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    /// Parameter to vary.
    #[arg(long)]
    pub param: String,
    /// First parameter value.
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    /// Last parameter value.
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    /// Number of grid values, at least 2.
    #[arg(long)]
    pub steps: usize,
    /// Also write the curve as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Also draw the curve as SVG.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub log_x: bool,
    /// Label each point with its parameter value.
    #[arg(long)]
    pub labels: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// A risk, e.g. `exponential:lambda=1`, `discrete:values=0/1000,weights=0.9/0.1`
    /// or `data:path=losses.csv,column=loss,scale=1e6`. Repeat for each risk.
    #[arg(long = "spec", required = true)]
    pub specs: Vec<String>,
    /// VaR and ES levels.
    #[arg(long, value_delimiter = ',', default_values_t = mprisk::classic::DEFAULT_LEVELS)]
    pub levels: Vec<f64>,
    /// Draw every risk as a point on one (m, p) plot.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub log_x: bool,
    #[arg(long)]
    pub labels: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}
