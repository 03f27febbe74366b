use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use serde::Serialize;
use sumlab::ratio::{parse_rational, serde_r64, serde_r64_vec};

fn rational(s: &str) -> Result<Rational64, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "sumlab", version, about = "Exact experiments on integer sets with small doubling")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Directory for output artifacts.
    #[arg(long, global = true, default_value = "sumlab-out")]
    pub out: PathBuf,
    /// Rayon worker count; 0 uses one per core.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cache directory (defaults to $SUMLAB_CACHE_DIR; no caching when neither is set).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_cache: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Census of Lambda(n, k, lambda) by exhaustive pruned search.
    Enumerate(EnumerateArgs),
    /// Run one of the exhaustive or grid verification suites.
    Verify(VerifyArgs),
    /// Generate and check one of the lower-bound constructions.
    Construct(ConstructArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub n: i64,
    #[arg(long)]
    pub k: i64,
    /// Doubling bound as an integer or p/q.
    #[arg(long, value_parser = rational)]
    #[serde(with = "serde_r64")]
    pub lambda: Rational64,
    /// Round lambda*k and lambda*k/2 down when they are not integers.
    #[arg(long)]
    pub floor_mode: bool,
    /// Epsilon for c(lambda, epsilon), an integer or p/q in (0, 1).
    #[arg(long, value_parser = rational, default_value = "1/2")]
    #[serde(with = "serde_r64")]
    pub epsilon: Rational64,
    /// Override delta in an extra set of class columns.
    #[arg(long, value_parser = rational)]
    #[serde(with = "serde_r64::option")]
    pub delta: Option<Rational64>,
    /// Override f(lambda) in the override columns.
    #[arg(long = "f", value_parser = rational)]
    #[serde(with = "serde_r64::option")]
    pub f: Option<Rational64>,
    /// Override c in the override columns.
    #[arg(long = "c", value_parser = rational)]
    #[serde(with = "serde_r64::option")]
    pub c: Option<Rational64>,
    /// Abort after this many search nodes (exit code 2).
    #[arg(long, default_value_t = 2_000_000_000)]
    pub max_nodes: u64,
    /// Also write the structure curve.
    #[arg(long)]
    pub emit_curve: bool,
    /// Largest c on the curve; defaults to n - floor(lambda k/2).
    #[arg(long)]
    pub c_max: Option<i64>,
    /// Also write every member set, one JSON array per line.
    #[arg(long)]
    pub members: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Covering,
    Injection,
    Freiman,
    Supersat,
    Tails,
    Pittel,
    Inequalities,
    AppendixB,
    Fkg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridSize {
    Default,
    Small,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Ground set {0..max} for covering, injection and freiman.
    #[arg(long)]
    pub max: Option<u32>,
    #[arg(long, default_value_t = 3)]
    pub min_size: u32,
    #[arg(long, default_value_t = 8)]
    pub max_size: u32,
    /// Largest |Y| for supersat.
    #[arg(long, default_value_t = 10)]
    pub max_y: usize,
    #[arg(long, value_parser = rational, value_delimiter = ',', default_value = "1/8,1/5")]
    #[serde(with = "serde_r64_vec")]
    pub gammas: Vec<Rational64>,
    /// Ground set size for tails and pittel.
    #[arg(long, default_value_t = 12)]
    pub n: usize,
    #[arg(long, default_value_t = 6)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = GridSize::Default)]
    pub grid: GridSize,
    /// fkg: largest vertex count, edge count, loop count and k.
    #[arg(long, default_value_t = 6)]
    pub max_vertices: usize,
    #[arg(long, default_value_t = 4)]
    pub max_edges: usize,
    #[arg(long, default_value_t = 2)]
    pub max_loops: usize,
    #[arg(long, default_value_t = 3)]
    pub max_k: usize,
    /// Write every checked row, not only the failures.
    #[arg(long)]
    pub rows: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    ApFamily,
    AppcFamily,
    TwoPoint,
    Fkg,
    Endpoint,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    pub name: Construction,
    #[arg(long)]
    pub n: Option<i64>,
    #[arg(long)]
    pub k: Option<i64>,
    #[arg(long, value_parser = rational)]
    #[serde(with = "serde_r64::option")]
    pub lambda: Option<Rational64>,
    #[arg(long)]
    pub floor_mode: bool,
    #[arg(long)]
    pub r: Option<i64>,
    /// Window side for the endpoint family.
    #[arg(long)]
    pub b: Option<i64>,
    /// Monte Carlo trials (two-point) or sampled members (endpoint, large families).
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Families up to this size are verified member by member.
    #[arg(long, default_value_t = 1_000_000)]
    pub exhaustive_limit: u64,
    /// Graph JSON: {"vertex_count": n, "edges": [[u, v], ...], "loops": [v, ...]}.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}
