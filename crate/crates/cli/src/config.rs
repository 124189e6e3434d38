//! Command-line grammar. The parsed form doubles as the serialized run
//! configuration recorded alongside results.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "tptri", version, about = "Polynomial triangles and total-positivity certification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: RunConfig,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "subcommand")]
pub enum RunConfig {
    /// Generate a triangle.
    Triangle(TriangleArgs),
    /// Certify or refute coefficientwise total positivity of a leading block.
    Check(CheckArgs),
    /// Run an identity suite between independent constructions.
    Crosscheck(CrosscheckArgs),
    /// Dump a planar network or its path matrix.
    Network(NetworkArgs),
    /// Convert between set partitions and path words.
    Bijection(BijectionArgs),
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyArgs {
    /// eulerian, rev-stirling, general4, general6, ace-seq, alt-i, alt-ii, planted
    #[arg(long)]
    pub family: String,
    /// Comma-separated `name=value`; values are integers or symbol names.
    #[arg(long, default_value = "")]
    pub params: String,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriangleFormat {
    Json,
    Csv,
    Text,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub nmax: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub format: TriangleFormat,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    /// Size of the leading block.
    #[arg(long)]
    pub n: usize,
    /// Highest minor order (defaults to N).
    #[arg(long)]
    pub rmax: Option<usize>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, env = "TPTRI_JOBS")]
    pub jobs: Option<usize>,
    #[arg(long, default_value_t = 64)]
    pub chunk_size: u64,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Continue the run recorded in --checkpoint.
    #[arg(long, requires = "checkpoint")]
    pub resume: bool,
    #[arg(long)]
    pub budget_seconds: Option<f64>,
    #[arg(long)]
    pub budget_chunks: Option<u64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Prop21,
    Lemma22,
    Reversal,
    Network,
    Bijection,
    Lgv,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrosscheckArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long)]
    pub nmax: usize,
    /// Largest minor order for the lgv suite.
    #[arg(long, default_value_t = 2)]
    pub minor_size: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NetworkKind {
    /// D with unit horizontal weights and diagonal weight l.
    D,
    /// The reduced network D'.
    Dprime,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetworkFormat {
    Json,
    Dot,
    Matrix,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Specialize {
    None,
    Ace,
    AceSeq,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkArgs {
    #[arg(long, value_enum)]
    pub net: NetworkKind,
    #[arg(long)]
    pub nmax: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub format: NetworkFormat,
    /// Specialization applied to the path matrix (matrix format only).
    #[arg(long, value_enum, default_value = "none")]
    pub specialize: Specialize,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[group(required = true, multiple = false, id = "input")]
pub struct BijectionInput {
    /// Bar notation, e.g. `158|239|47|6`.
    #[arg(long)]
    pub partition: Option<String>,
    /// Space-separated letters, e.g. `a(1,1,0) e(0,1)`; needs --n and --k.
    #[arg(long, requires_all = ["n", "k"])]
    pub word: Option<String>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BijectionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: BijectionInput,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
}
