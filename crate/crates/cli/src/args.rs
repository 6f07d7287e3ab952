use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "fqlab", version, about = "Exact incidence and sum-product experiments over finite fields")]
pub struct Cli {
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "FQLAB_WORKERS", default_value_t = 0)]
    pub workers: usize,
    /// Directory for memoized sweep and law-suite results.
    #[arg(long, global = true, env = "FQLAB_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact statistics of A x B.
    Stat(StatArgs),
    /// Exact-law suite, claim ratio reports, and the sum-ratio conclusions.
    Verify(VerifyArgs),
    /// Ratio reports over a grid of fields and sizes.
    Sweep(SweepArgs),
    /// Constructive lemma trace.
    Lemma(LemmaArgs),
    /// Hill-climbing search for a large ratio.
    Search(SearchArgs),
    /// Re-evaluates a stored ratio report or lemma trace.
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    /// Field order; alternative to --p/--m.
    #[arg(long)]
    pub q: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct SetArgs {
    /// Family descriptor for A, e.g. `interval:n=10`.
    #[arg(long)]
    pub family: Option<String>,
    /// Set file for A.
    #[arg(long)]
    pub set: Option<PathBuf>,
    /// Family descriptor for B (default B = A).
    #[arg(long)]
    pub family_b: Option<String>,
    #[arg(long)]
    pub set_b: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct OutArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Defaults to csv for `.csv` outputs, json otherwise.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug, Clone)]
pub struct ClaimOpts {
    /// Triple counter: oracle, line_aggregate or energy_decomposition.
    #[arg(long)]
    pub triple_mode: Option<String>,
    /// Exponent loss for the sumset and energy claims, as `a/b`.
    #[arg(long)]
    pub delta: Option<String>,
    /// Subfield threshold for the sum-ratio lemma, as `a/b`.
    #[arg(long)]
    pub eta: Option<String>,
    /// Hyperbola parameters (encodings); default is every nonzero alpha.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<u32>>,
}

#[derive(Args, Debug)]
pub struct StatArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub sets: SetArgs,
    #[command(flatten)]
    pub out: OutArgs,
    /// Comma list from I, I2, I3, I4, L, T, T*, E+, Ex.
    #[arg(long, default_value = "I,L,T,T*,E+,Ex")]
    pub stats: String,
    #[arg(long, default_value = "line_aggregate")]
    pub triple_mode: String,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(subcommand)]
    pub what: VerifyCommand,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    /// Seeded exact-law suite; exits 5 on any violation.
    ExactLaws(ExactLawArgs),
    /// One claim's ratio report.
    Claim(ClaimArgs),
    /// Both sum-ratio disjuncts and the energy conclusion for one set.
    Appendix(AppendixArgs),
    /// `A/A = F_q` whenever `|A|^2 > q`; exhaustive unless --samples.
    QuotientFull(QuotientArgs),
}

#[derive(Args, Debug)]
pub struct ExactLawArgs {
    /// Field orders, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [101u64, 64, 27])]
    pub q: Vec<u64>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct ClaimArgs {
    pub claim: String,
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub sets: SetArgs,
    #[command(flatten)]
    pub opts: ClaimOpts,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct AppendixArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub sets: SetArgs,
    #[command(flatten)]
    pub opts: ClaimOpts,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct QuotientArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub samples: Option<usize>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// JSON sweep spec; flags below are ignored when given.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub claim: Option<String>,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub family_b: Option<String>,
    /// `a:b`, `a:b:step` or a comma list.
    #[arg(long)]
    pub sizes: Option<String>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    /// Field orders, comma separated; added to --p/--m.
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<u64>,
    #[command(flatten)]
    pub opts: ClaimOpts,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct LemmaArgs {
    /// One of popularity, shen_cover, plunnecke, plunnecke_refined, bsg,
    /// bourgain, quotient_classify, pivot, reciprocal_energy_lines,
    /// claim1_chain.
    pub lemma: String,
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long = "setX")]
    pub set_x: Option<PathBuf>,
    #[arg(long = "familyX")]
    pub family_x: Option<String>,
    /// Repeatable; several Y sets feed the Plunnecke lemmas.
    #[arg(long = "setY")]
    pub set_y: Vec<PathBuf>,
    #[arg(long = "familyY")]
    pub family_y: Vec<String>,
    /// Popularity weights, one per element of X.
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<u64>>,
    /// Popularity threshold K.
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long, default_value = "1/2")]
    pub eps: String,
    /// Cover kind: sum or difference.
    #[arg(long, default_value = "sum")]
    pub cover: String,
    /// BSG form: difference_single or sum_pair.
    #[arg(long, default_value = "difference_single")]
    pub form: String,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    pub claim: String,
    #[command(flatten)]
    pub field: FieldArgs,
    /// Restrict to one family kind; default mixes kinds.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long, default_value_t = 200)]
    pub budget: usize,
    #[arg(long, default_value_t = 24)]
    pub max_size: u64,
    #[command(flatten)]
    pub opts: ClaimOpts,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    pub file: PathBuf,
}
