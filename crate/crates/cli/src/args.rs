use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "nmim",
    version,
    about = "Message importance measure experiments",
    after_help = "Exit codes: 0 success, 2 invalid input, 3 infeasible budget, 4 I/O error.\n\
                  NMIM_SEED is reserved for future stochastic features and currently ignored."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// NMIM, per-event importance and the gap report of one source, as JSON
    Compute {
        #[command(flatten)]
        source: SourceArgs,
        /// Output file; stdout if omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Code lengths of NMIM, equal (Code1) and 1-p weighted (Code2) allocation per K
    Allocate {
        #[command(flatten)]
        source: SourceArgs,
        /// Total budgets K, e.g. 10:200:10
        #[arg(long, default_value = "10:200:10")]
        k: String,
        /// Initial per-event length L, also the per-event cap
        #[arg(long, default_value_t = 100)]
        l: usize,
        #[arg(long, value_enum, default_value_t = ModelChoice::Both)]
        model: ModelChoice,
        /// Code alphabet size for the exponent model
        #[arg(long, default_value_t = 2)]
        gamma: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// NMIM change of a Bernoulli source through a binary symmetric channel
    Bsc {
        /// Source parameters, e.g. 0.05:0.5:0.01
        #[arg(long)]
        p: String,
        /// Crossover probability
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// NMIM-loss distortion function samples
    Distortion {
        /// Source parameters, e.g. 0.1,0.15,0.2
        #[arg(long)]
        p: String,
        /// Hamming distortions, e.g. 0:0.6:0.005
        #[arg(long)]
        d: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximum receiver entropy under an NMIM-loss budget
    Plan {
        /// Channel capacities in bits per use
        #[arg(long)]
        c: String,
        /// Channel uses
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// NMIM-loss budgets in nats, e.g. 0:8:0.01
        #[arg(long)]
        delta: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Writes every experiment's data into a directory
    Figures {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Default, Args)]
#[command(group(
    ArgGroup::new("kind")
        .args(["input", "uniform", "zipf", "normal", "rayleigh", "storage"])
        .required(true)
))]
pub struct SourceArgs {
    /// JSON file of the form {"probs": [..]}
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Uniform source with this many events
    #[arg(long)]
    pub uniform: Option<usize>,
    /// Zipf source, P(k) proportional to k^-exponent
    #[arg(long, requires = "n")]
    pub zipf: bool,
    /// Discretized normal source, mean 0.51 n, variance n
    #[arg(long, requires = "n")]
    pub normal: bool,
    /// Discretized Rayleigh source, scale n / 2.5
    #[arg(long, requires = "n")]
    pub rayleigh: bool,
    /// The five-event storage example
    #[arg(long)]
    pub storage: bool,
    /// Number of events for generated sources
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = nmim::sources::DEFAULT_ZIPF_EXPONENT)]
    pub exponent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelChoice {
    Reciprocal,
    Exponent,
    Both,
}
