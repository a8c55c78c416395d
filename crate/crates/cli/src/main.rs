use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod error;

use error::CliError;

/// Cognate clustering of multilingual word lists.
#[derive(Debug, Parser)]
#[command(name = "cognate", version, about, propagate_version = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write per-meaning similarity matrices.
    Align(AlignArgs),
    /// Cluster every meaning into cognate sets and write the partition.
    Cluster(ClusterArgs),
    /// Cluster (or read predictions) and score against gold cognate classes.
    Evaluate(EvaluateArgs),
    /// Estimate a PMI matrix from aligned word pairs.
    PmiEstimate(PmiEstimateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScorerKind {
    Vanilla,
    Pmi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LinkageArg {
    Average,
    Single,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Kv,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Word list TSV (language, concept, transcription, cognate_class).
    #[arg(long)]
    input: PathBuf,

    /// Reject ASJP modifier characters instead of dropping them.
    #[arg(long)]
    strict_modifiers: bool,

    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct ScoringArgs {
    #[arg(long, value_enum, default_value = "vanilla")]
    scorer: ScorerKind,

    /// PMI matrix file, required with `--scorer pmi`.
    #[arg(long)]
    pmi_matrix: Option<PathBuf>,

    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    gap_open: f64,

    #[arg(long, default_value_t = -0.5, allow_negative_numbers = true)]
    gap_extend: f64,

    /// Divide each score by the mean self-alignment score of the two words.
    #[arg(long)]
    normalize: bool,
}

#[derive(Debug, Args)]
struct ClusteringArgs {
    /// New-cluster threshold on the best average similarity.
    #[arg(long, default_value_t = 0.01)]
    alpha: f64,

    #[arg(long, default_value_t = 3)]
    max_scans: usize,

    #[arg(long, value_enum, default_value = "average")]
    linkage: LinkageArg,

    /// Scan words in a seeded random order instead of file order.
    #[arg(long)]
    shuffle_seed: Option<u64>,

    /// Use average-linkage agglomerative clustering stopped at this similarity
    /// instead of the CRP scan.
    #[arg(long, allow_negative_numbers = true)]
    threshold: Option<f64>,
}

#[derive(Debug, Args)]
struct AlignArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    scoring: ScoringArgs,
    /// Directory receiving one `<meaning>.tsv` per meaning; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ClusterArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    scoring: ScoringArgs,
    #[command(flatten)]
    clustering: ClusteringArgs,
    /// Partition TSV output; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[command(flatten)]
    cluster: ClusterArgs,

    /// Word list holding the gold classes; defaults to the input's own column.
    #[arg(long)]
    gold: Option<PathBuf>,

    /// Evaluate this partition TSV instead of clustering.
    #[arg(long)]
    predictions: Option<PathBuf>,

    /// Report output; standard output if omitted.
    #[arg(long)]
    report: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,

    /// Print scores as percentages with two decimals.
    #[arg(long)]
    percent: bool,
}

#[derive(Debug, Args)]
struct PmiEstimateArgs {
    /// Aligned pairs, one `top<TAB>bottom` per line with `-` for gaps.
    #[arg(long)]
    input: PathBuf,

    /// Pseudo-count added to every segment-pair count.
    #[arg(long, default_value_t = 0.1)]
    smoothing: f64,

    /// Matrix output; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<(), CliError> = match cli.command {
        Command::Align(a) => commands::align(a),
        Command::Cluster(a) => commands::cluster(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::PmiEstimate(a) => commands::pmi_estimate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
