//! Argument surface. Every analysis knob is optional on the command line;
//! unset values fall back to the config file, then to built-in defaults.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "eatsim",
    version,
    about = "Embedding-aided similarity, robustness, and reducibility analysis for multiplex networks"
)]
pub struct Cli {
    /// key=value configuration file; command-line flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Master seed driving every randomized stage
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker thread count (also honors EATSIM_THREADS)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a synthetic multiplex edge list plus a .meta sidecar
    Generate(GenerateArgs),
    /// Train one embedding file per layer of a multiplex
    Embed(EmbedArgs),
    /// Score interlayer similarity for every layer pair
    Sim(SimArgs),
    /// Targeted-attack robustness of a two-layer multiplex
    Robustness(RobustnessArgs),
    /// Greedily merge the most similar layers, tracking distinguishability
    Reduce(ReduceArgs),
    /// Run a bundled experiment recipe and emit its plot-ready data
    Reproduce(ReproduceArgs),
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub model: GenerateModel,
}

#[derive(Subcommand, Debug)]
pub enum GenerateModel {
    /// Single preferential-attachment layer
    Ba {
        #[arg(long)]
        nodes: usize,
        /// Edges attached per arriving node
        #[arg(long)]
        edges_per_node: usize,
        #[arg(long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Correlated geometric multiplex (hidden popularity/similarity space)
    Gmm {
        #[arg(long)]
        nodes: usize,
        #[arg(long, default_value_t = 6.0)]
        mean_degree: f64,
        /// Target degree-distribution exponent
        #[arg(long, default_value_t = 2.5)]
        gamma: f64,
        /// Clustering temperature in (0, 1)
        #[arg(long, default_value_t = 0.4)]
        temperature: f64,
        /// Interlayer angular correlation g in [0, 1]
        #[arg(long, default_value_t = 1.0)]
        angular: f64,
        /// Interlayer radial (degree-rank) correlation v in [0, 1]
        #[arg(long, default_value_t = 1.0)]
        radial: f64,
        #[arg(long, default_value_t = 2)]
        layers: usize,
        #[arg(long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Preferential-attachment layer plus independently rewired replicas
    Ladder {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        edges_per_node: usize,
        /// Comma-separated rewiring probabilities (default 0.05..=0.95 step 0.05)
        #[arg(long)]
        probs: Option<String>,
        #[arg(long, value_name = "FILE")]
        output: PathBuf,
    },
}

/// Embedding hyperparameters shared by `embed`, `sim`, and `reduce`.
#[derive(Args, Debug, Clone)]
pub struct EmbedOpts {
    /// Embedding dimensionality
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub walks_per_node: Option<usize>,
    #[arg(long)]
    pub walk_length: Option<usize>,
    /// Context window radius
    #[arg(long)]
    pub window: Option<usize>,
    /// Walk return bias (higher discourages backtracking)
    #[arg(long)]
    pub return_bias: Option<f64>,
    /// Walk in-out bias (higher keeps walks local)
    #[arg(long)]
    pub inout_bias: Option<f64>,
    #[arg(long)]
    pub negative_samples: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Peak learning rate (decays linearly to 1% of this)
    #[arg(long)]
    pub learning_rate: Option<f64>,
}

#[derive(Args, Debug)]
pub struct EmbedArgs {
    /// Multiplex edge list to embed
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Directory receiving one layer_<i>.emb file per layer
    #[arg(long, value_name = "DIR")]
    pub output_dir: PathBuf,
    #[command(flatten)]
    pub embed: EmbedOpts,
}

#[derive(Args, Debug)]
pub struct SimArgs {
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Pairwise report CSV (layer_i, layer_j, ped, aed, d, eatsim)
    #[arg(long, value_name = "FILE")]
    pub output: PathBuf,
    /// Optional heatmap-ready similarity grid CSV
    #[arg(long, value_name = "FILE")]
    pub grid: Option<PathBuf>,
    /// Blend weight between the two losses
    #[arg(long)]
    pub omega: Option<f64>,
    #[command(flatten)]
    pub embed: EmbedOpts,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum CandidatesArg {
    /// Attack any not-yet-removed node
    AllSurviving,
    /// Attack only current mutually-connected-component members
    Gmcc,
}

#[derive(Args, Debug)]
pub struct RobustnessArgs {
    /// Two-layer multiplex edge list
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Structured-text report path
    #[arg(long, value_name = "FILE")]
    pub output: PathBuf,
    /// Upper threshold factor for the removal count
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Dismantling threshold exponent
    #[arg(long)]
    pub beta: Option<f64>,
    /// Reshuffled replicas averaged into the baseline
    #[arg(long)]
    pub reshuffles: Option<usize>,
    #[arg(long, value_enum)]
    pub candidates: Option<CandidatesArg>,
    /// Directory for per-step decay traces (original + each replica)
    #[arg(long, value_name = "DIR")]
    pub traces_dir: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum MetricArg {
    /// Embedding-based similarity
    Eatsim,
    /// Spectral Jensen-Shannon distance
    Jsd,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum LinkageArg {
    /// Re-embed / re-diagonalize merged groups (default)
    Recompute,
    /// Average original pair scores instead
    Average,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Directory receiving trajectory.csv, dendrogram.txt, grouping.txt
    #[arg(long, value_name = "DIR")]
    pub output_dir: PathBuf,
    #[arg(long, value_enum)]
    pub metric: Option<MetricArg>,
    #[arg(long, value_enum)]
    pub linkage: Option<LinkageArg>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[command(flatten)]
    pub embed: EmbedOpts,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum ExperimentArg {
    /// Rewiring ladder: similarity of the original vs each rewired layer
    Fig2a,
    /// Rewiring ladder: full 20x20 similarity heatmap
    Fig2b,
    /// Geometric sweep: similarity vs robustness score across g
    Fig3,
    /// Rewiring ladder: greedy reduction under both metrics
    Fig5,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    #[arg(long, value_enum)]
    pub experiment: ExperimentArg,
    #[arg(long, value_name = "DIR")]
    pub output_dir: PathBuf,
}
