use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "ccr", version, about = "Canonical commutation relations on Krein spaces: exact identities, truncated matrices and Weyl-pair checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the verification suite for one representation and dimension
    Verify(VerifyArgs),
    /// Weyl-relation residual against dimension; pins the convergence tolerance
    Sweep(SweepArgs),
    /// Normal-order an expression, optionally acting on a state
    Eval(EvalArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Fock,
    Antifock,
    Lambda,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PrecisionArg {
    /// Fixed-point evaluation; resolves residuals far below 1e-16
    Extended,
    /// Double precision via dense eigendecomposition
    F64,
}

#[derive(Debug, Args)]
pub struct KindArgs {
    #[arg(long, value_enum, default_value = "antifock")]
    pub kind: KindArg,
    /// Λ parameter as a rational `p/q` in (-1, 0); required with `--kind lambda`
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub kind: KindArgs,
    /// Truncation dimension D (odd for the Λ window)
    #[arg(long)]
    pub dim: usize,
    /// Interior margin: an integer, or `auto` (⌈D/4⌉ for Weyl checks, 1 for identities)
    #[arg(long, default_value = "auto")]
    pub margin: String,
    /// Weyl grid as `s,t;s,t;...`; defaults to all sign combinations of {0.1, 0.3, 0.5}
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Overrides every floating-point tolerance (exact checks stay exact)
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Seed for the random-vector property checks
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub kind: KindArgs,
    /// Comma-separated dimensions, at least two
    #[arg(long, default_value = "16,32,64,128")]
    pub dims: String,
    #[arg(long, default_value = "auto")]
    pub margin: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0.3,0.3")]
    pub grid: String,
    /// Enforce this bound on the largest-D residual instead of the recommended tol*
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value = "extended")]
    pub precision: PrecisionArg,
    /// Fractional bits for `--precision extended`
    #[arg(long, default_value_t = ccr_core::precise::DEFAULT_BITS)]
    pub bits: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Expression, e.g. "a*a+ - a+*a"
    #[arg(allow_hyphen_values = true)]
    pub expr: String,
    /// Representation; without it the anti-Fock rewrite rules for J apply
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// State to act on, e.g. `e2` or `e0 - (1/2)*e3`
    #[arg(long, allow_hyphen_values = true)]
    pub state: Option<String>,
}
