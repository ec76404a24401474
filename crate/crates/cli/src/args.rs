use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "framing", version, about = "Classify SO(4)-bundles over S⁴ and decide parallelizability of 4-manifolds")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Emit one JSON document on stdout; human-readable text goes to stderr.
    #[arg(long, global = true)]
    pub json: bool,

    /// Seed for randomized checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Hopf grid resolution along ξ₁, ξ₂ and η.
    #[arg(long, global = true, num_args = 3, value_names = ["XI1", "XI2", "ETA"])]
    pub resolution: Option<Vec<usize>>,

    /// Number of Newton seeds for preimage counting.
    #[arg(long, global = true)]
    pub seeds: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree of a self-map of S³.
    Degree(DegreeArgs),
    /// Lift a word map to S³ × S³ and report the component degrees.
    Lift(LiftArgs),
    /// Euler number, Pontryagin number and Φ-coordinates of a clutching word.
    Classify(ClassifyArgs),
    /// Decide parallelizability for catalog entries or a manifold file.
    Check(CheckArgs),
    /// Recompute every pinned identity and report pass/fail per claim.
    #[command(name = "verify-paper")]
    Verify,
    /// List the built-in manifolds.
    Catalog,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    Integral,
    Preimage,
    All,
}

#[derive(Debug, Args)]
pub struct DegreeArgs {
    /// `pow:n` for q ↦ qⁿ, or a word such as `eta^2 * nu^-1`.
    #[arg(long)]
    pub map: String,

    #[arg(long, value_enum, default_value = "all")]
    pub method: MethodArg,

    /// Lift component of a word map.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub component: Option<u8>,

    /// Regular value for preimage counting.
    #[arg(long, num_args = 4, value_names = ["W", "X", "Y", "Z"], allow_negative_numbers = true)]
    pub target: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct LiftArgs {
    pub word: String,

    /// Also lift the word's matrices numerically and integrate both components.
    #[arg(long)]
    pub numeric: bool,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    pub word: String,

    /// Classify by sampling the word as a black-box map.
    #[arg(long)]
    pub numeric: bool,

    /// With `--numeric`, confirm both degrees by preimage counting.
    #[arg(long, requires = "numeric")]
    pub cross_check: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["catalog", "file"])))]
pub struct CheckArgs {
    /// Built-in entry name, or `all`.
    #[arg(long)]
    pub catalog: Option<String>,

    /// JSON file with a list of manifold records.
    pub file: Option<PathBuf>,
}
