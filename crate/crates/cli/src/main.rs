use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

mod commands;

#[derive(Parser, Debug)]
#[command(
    name = "hsrl",
    version,
    about = "Hierarchical community-compression node embeddings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Compress a graph level by level and write every level.
    Compress(CompressArgs),
    /// Learn hierarchical embeddings.
    Embed(EmbedArgs),
    /// Link prediction: plain learner vs. its hierarchical version.
    Evaluate(EvaluateArgs),
    /// Link-prediction AUC as one parameter varies.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Serialize)]
struct GraphArgs {
    /// Edge list: `u v [weight]` per line, `#` comments.
    #[arg(long)]
    input: PathBuf,
    /// Weight of edges given without one.
    #[arg(long, default_value_t = 1.0)]
    default_weight: f64,
}

#[derive(Args, Debug, Serialize)]
struct OutputArgs {
    /// Directory for all artifacts; created if missing.
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Serialize, Clone)]
struct LearnerArgs {
    /// deepwalk, node2vec or line.
    #[arg(long, default_value = "deepwalk")]
    learner: String,
    #[arg(long, default_value_t = 64)]
    dim: usize,
    /// Walks per node.
    #[arg(long, default_value_t = 10)]
    walks: usize,
    #[arg(long, default_value_t = 40)]
    walk_length: usize,
    #[arg(long, default_value_t = 5)]
    window: usize,
    #[arg(long, default_value_t = 0.025)]
    lr: f64,
    /// Negative samples per positive pair.
    #[arg(long, default_value_t = 5)]
    negatives: usize,
    /// node2vec return parameter.
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// node2vec in-out parameter.
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    /// first, second or both.
    #[arg(long, default_value = "both")]
    line_order: String,
    /// LINE edge samples (default 100 per edge).
    #[arg(long)]
    line_samples: Option<usize>,
    #[arg(long, default_value_t = 1)]
    epochs: usize,
}

#[derive(Args, Debug, Serialize)]
struct CompressArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    out: OutputArgs,
    #[arg(long, default_value_t = 3)]
    levels: usize,
    /// Also write Graphviz files for every level.
    #[arg(long)]
    dot: bool,
}

#[derive(Args, Debug, Serialize)]
struct EmbedArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    out: OutputArgs,
    #[command(flatten)]
    learner: LearnerArgs,
    #[arg(long, default_value_t = 3)]
    levels: usize,
    #[arg(long)]
    dot: bool,
}

#[derive(Args, Debug, Serialize)]
struct EvaluateArgs {
    /// One or more edge lists; each becomes a table column.
    #[arg(long, required = true)]
    input: Vec<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    default_weight: f64,
    #[command(flatten)]
    out: OutputArgs,
    #[command(flatten)]
    learner: LearnerArgs,
    #[arg(long, default_value_t = 3)]
    levels: usize,
    /// Repetitions; repetition r uses seed + r.
    #[arg(long, default_value_t = 20)]
    reps: usize,
    /// Fraction of edges kept for training.
    #[arg(long, default_value_t = 0.8)]
    ratio: f64,
}

#[derive(Args, Debug, Serialize)]
struct SweepArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    out: OutputArgs,
    #[command(flatten)]
    learner: LearnerArgs,
    /// dim or levels.
    #[arg(long)]
    param: String,
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    levels: usize,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 0.8)]
    ratio: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("{first}");
            return ExitCode::from(2);
        }
    };
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}

fn run(command: &Command) -> Result<()> {
    match command {
        Command::Compress(a) => commands::compress(a, command),
        Command::Embed(a) => commands::embed(a, command),
        Command::Evaluate(a) => commands::evaluate(a, command),
        Command::Sweep(a) => commands::sweep(a, command),
    }
}

/// Fails early on unreadable inputs or an output path that is a file.
fn check_paths(inputs: &[&Path], output: &Path) -> Result<()> {
    for input in inputs {
        if !input.is_file() {
            bail!("cannot read input {}", input.display());
        }
    }
    if output.exists() && !output.is_dir() {
        bail!("output {} exists and is not a directory", output.display());
    }
    std::fs::create_dir_all(output).with_context(|| format!("cannot create {}", output.display()))
}
