use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "hyperwave", version, about = "Numerics for the hyperbolic Anderson equation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Laplace-transform check of the wave kernel against the heat kernel.
    #[command(args_override_self = true)]
    GreenCheck(GreenCheckArgs),
    /// Moment-series coefficients by quadrature or by local-time Monte Carlo.
    #[command(args_override_self = true)]
    Moment(MomentArgs),
    /// Jump-chain Monte Carlo for the wave equation with a potential.
    #[command(args_override_self = true)]
    Dmt(DmtArgs),
    /// Numerical solution of the variational problem.
    #[command(args_override_self = true)]
    Varsolve(VarsolveArgs),
    /// Predicted intermittency exponents.
    #[command(args_override_self = true)]
    Asymptotics(AsymptoticsArgs),
    /// Pathwise check of the Stratonovich-to-Itô expansion.
    #[command(args_override_self = true)]
    Humeyer(HumeyerArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Path for the command's CSV table.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GreenCheckArgs {
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x: f64,
    /// Check the Fourier-side identity at frequency `k` instead.
    #[arg(long)]
    pub k: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    Quadrature,
    #[value(name = "ilt_mc")]
    IltMc,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MomentArgs {
    #[arg(long, default_value = "white1d")]
    pub model: String,
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = MomentMethod::Quadrature)]
    pub method: MomentMethod,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 10_000)]
    pub reps: u64,
    #[arg(long, default_value_t = 0.1)]
    pub eps0: f64,
    /// Mean of the single chaos term of this order (p = 1 only).
    #[arg(long)]
    pub order: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DmtArgs {
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// `const:<c>`, `gauss:a=<a>,s=<s>` or `table:<csv path>`.
    #[arg(long, default_value = "const:1", allow_hyphen_values = true)]
    pub potential: String,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Comma-separated coordinates of the evaluation point.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, default_value_t = 100_000)]
    pub reps: u64,
    /// Write the per-jump-count variance breakdown as the CSV table.
    #[arg(long)]
    pub report: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    Full,
    #[value(name = "gaussian-ansatz")]
    GaussianAnsatz,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VarsolveArgs {
    #[arg(long, default_value = "white1d")]
    pub model: String,
    #[arg(long = "grid-L")]
    pub grid_l: Option<f64>,
    #[arg(long = "grid-h")]
    pub grid_h: Option<f64>,
    #[arg(long, default_value_t = 4)]
    pub restarts: u64,
    #[arg(long, default_value_t = 2000)]
    pub iterations: usize,
    #[arg(long, value_enum, default_value_t = SolveMode::Full)]
    pub mode: SolveMode,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AsymptoticsArgs {
    #[arg(long, default_value_t = 1)]
    pub p: u32,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// A number, `published` (the closed white-noise value) or `solve`.
    #[arg(long, default_value = "published")]
    pub m: String,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Restarts used when the constant is solved for.
    #[arg(long, default_value_t = 2)]
    pub restarts: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HumeyerArgs {
    /// Tensor order.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Dimension of the Gaussian vector.
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    /// Random (tensor, covariance) pairs.
    #[arg(long, default_value_t = 1)]
    pub triples: u64,
    /// Sampled vectors per pair.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}
