use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Planted CLWE learning instances: generate data, export the planted
/// classifier, run the check suite, and run distinguishing experiments.
///
/// Exit codes: 0 success, 1 check failure, 2 parameter error, 3 I/O or
/// format error, 4 missing input artifact.
#[derive(Debug, Parser)]
#[command(name = "clwe", version)]
pub struct Cli {
    /// Worker threads. Outputs are identical for every value.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a planted or null dataset file.
    Generate(GenerateArgs),
    /// Build the planted PTF, print its exact error, optionally export it.
    Oracle(OracleArgs),
    /// Run the verification suite and write its report.
    Verify(VerifyArgs),
    /// Run the Hoeffding distinguisher once, or repeatedly for an advantage estimate.
    Distinguish(DistinguishArgs),
}

/// Instance parameters. Unset values take their defaults: gamma = 2√n,
/// beta = 1/n, delta = √3·beta, alpha = (gamma/10)/(gamma² + out_beta²)
/// with out_beta = √(beta² + delta²).
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 32)]
    pub n: usize,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Smoothing width of the rejection step; sets out_beta = √(beta² + delta²).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Truncation radius of each mixture component.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long = "c-plus", default_value_t = 0.0)]
    pub c_plus: f64,
    #[arg(long = "c-minus", default_value_t = 0.5)]
    pub c_minus: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Planted,
    Null,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Planted)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 100_000)]
    pub m: usize,
    /// Dataset output path.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the secret direction here. Without it the dataset is blind.
    #[arg(long)]
    pub secret: Option<PathBuf>,
    /// Store the monomial embedding of degree K instead of raw vectors.
    #[arg(long = "embed-deg", value_name = "K")]
    pub embed_deg: Option<usize>,
    /// Generate even if the two supports overlap.
    #[arg(long = "unsafe")]
    pub allow_overlap: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Number of protected `−1` bands on each side; the PTF has degree 4d.
    #[arg(long, default_value_t = 8)]
    pub d: u32,
    /// Take the parameters from this dataset's manifest.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Secret sidecar of `--dataset`.
    #[arg(long)]
    pub secret: Option<PathBuf>,
    /// Write the oracle as JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write LTF weights over the monomial embedding here.
    #[arg(long = "export-ltf", value_name = "PATH")]
    pub export_ltf: Option<PathBuf>,
    /// Embedding degree for `--export-ltf`; defaults to 4d.
    #[arg(long)]
    pub deg: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 20_240_601)]
    pub seed: u64,
    /// Reduced sample sizes.
    #[arg(long)]
    pub quick: bool,
    /// Run only these check groups (repeatable).
    #[arg(long = "only", value_name = "ID")]
    pub only: Vec<u8>,
    /// Extra disjointness grid point `GAMMA:OUT_BETA` (repeatable).
    #[arg(long = "grid", value_name = "GAMMA:OUT_BETA")]
    pub grid: Vec<String>,
    /// Report output path.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LearnerArg {
    Oracle,
    Perceptron,
    AveragedPerceptron,
    LogisticGd,
    PolyKernelPerceptron,
}

#[derive(Debug, Args)]
pub struct DistinguishArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 8)]
    pub d: u32,
    #[arg(long, default_value_t = 100_000)]
    pub m: usize,
    /// Advantage threshold.
    #[arg(long, default_value_t = 0.1)]
    pub tau: f64,
    #[arg(long, value_enum, default_value_t = LearnerArg::Oracle)]
    pub learner: LearnerArg,
    /// Degree of the polynomial-kernel perceptron.
    #[arg(long, default_value_t = 2)]
    pub deg: usize,
    /// Mode of the generated dataset when `--dataset` is not given.
    #[arg(long, value_enum, default_value_t = ModeArg::Planted)]
    pub mode: ModeArg,
    /// Decide on this dataset instead of a generated one.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Secret sidecar, needed by the oracle learner with `--dataset`.
    #[arg(long)]
    pub secret: Option<PathBuf>,
    /// Estimate the advantage over this many planted/null trial pairs.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}
