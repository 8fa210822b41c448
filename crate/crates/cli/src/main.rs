//! `qcpg-kit`: score, split, fit, search, select, generate and evaluate.

mod commands;
mod config;
mod error;
mod tables;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qcpg_core::dataset::{PairMode, SplitSizes};
use qcpg_core::selection::DEFAULT_SEM_MARGIN;

use crate::commands::OffsetSource;
use crate::config::{Config, Overrides};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "qcpg-kit", version, about = "Quality-controlled paraphrase experiment pipeline")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// `builtin` or `external:<command>`.
    #[arg(long, global = true)]
    scorer: Option<String>,
    /// `identity`, `retrieval`, `noisy:<std>` or `external:<command>`.
    #[arg(long, global = true)]
    generator: Option<String>,
    /// Output file (or directory for `split`); standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Append q_sem, q_syn, q_lex to a pairs TSV.
    Score {
        #[arg(long)]
        pairs: PathBuf,
        /// Tree sidecar aligned with the pair rows (source side).
        #[arg(long)]
        source_trees: Option<PathBuf>,
        /// Tree sidecar aligned with the pair rows (target side).
        #[arg(long)]
        target_trees: Option<PathBuf>,
        /// Cluster JSONL used to look up trees by sentence.
        #[arg(long)]
        clusters: Option<PathBuf>,
        /// `sentence<TAB>tree` lookup file.
        #[arg(long)]
        trees: Option<PathBuf>,
    },
    /// Split clusters into train/dev/test without sharing clusters.
    Split {
        #[arg(long)]
        clusters: Option<PathBuf>,
        #[arg(long)]
        train: usize,
        #[arg(long)]
        dev: usize,
        #[arg(long)]
        test: usize,
        /// Pair counting used for the quotas.
        #[arg(long, default_value = "all_unordered")]
        quota_mode: PairMode,
        /// Pair extraction used for the written TSVs.
        #[arg(long, default_value = "all_ordered")]
        extract_mode: PairMode,
    },
    /// Fit the quality predictor on scored pairs.
    TrainQp {
        #[arg(long)]
        train: PathBuf,
        /// Scored dev pairs; with several lambdas the lowest mean dev MSE wins.
        #[arg(long)]
        dev: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "1.0")]
        lambda: Vec<f64>,
    },
    /// Predict r(s) for one sentence per line.
    PredictQp {
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        sentences: PathBuf,
    },
    /// Grid search over offsets; writes the heatmap CSV.
    Grid {
        #[arg(long)]
        clusters: Option<PathBuf>,
        #[arg(long)]
        model: Option<PathBuf>,
        /// `min:step:max`
        #[arg(long)]
        sem: Option<String>,
        #[arg(long)]
        syn: Option<String>,
        #[arg(long)]
        lex: Option<String>,
    },
    /// Pick the operation point from a heatmap CSV.
    Select {
        #[arg(long)]
        heatmap: PathBuf,
        #[arg(long)]
        baseline_sem: f64,
        #[arg(long, default_value_t = DEFAULT_SEM_MARGIN)]
        margin: f64,
    },
    /// Generate paraphrases at an operation point.
    Generate {
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        clusters: Option<PathBuf>,
        /// One sentence per line; defaults to every cluster member.
        #[arg(long)]
        sentences: Option<PathBuf>,
        /// Operation point JSON written by `select`.
        #[arg(long, conflicts_with = "offset", required_unless_present = "offset")]
        point: Option<PathBuf>,
        /// `sem,syn,lex`
        #[arg(long, value_parser = commands::parse_offset, allow_hyphen_values = true)]
        offset: Option<qcpg_core::Offset>,
    },
    /// Report quality and BLEU per system.
    Eval {
        /// `name=paraphrases.tsv`, repeatable.
        #[arg(long = "system", value_parser = parse_system, required = true)]
        systems: Vec<(String, PathBuf)>,
        #[arg(long)]
        clusters: Option<PathBuf>,
        #[arg(long)]
        trees: Option<PathBuf>,
        /// One line per source row; tab-separated references.
        #[arg(long)]
        references: Option<PathBuf>,
    },
}

fn parse_system(s: &str) -> Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((name, path)) if !name.is_empty() && !path.is_empty() => Ok((name.to_string(), PathBuf::from(path))),
        _ => Err(format!("expected name=path, got {s:?}")),
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("QCPG_KIT_THREADS") else { return Ok(()) };
    let n: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("QCPG_KIT_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Internal(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let c = cli.common;
    let mut overrides =
        Overrides { seed: c.seed, scorer: c.scorer, generator: c.generator, out: c.out, ..Default::default() };
    match &cli.command {
        Command::Score { clusters, trees, .. } | Command::Eval { clusters, trees, .. } => {
            overrides.clusters = clusters.clone();
            overrides.trees = trees.clone();
        }
        Command::Split { clusters, .. } => overrides.clusters = clusters.clone(),
        Command::PredictQp { model, .. } => overrides.model = model.clone(),
        Command::Grid { clusters, model, sem, syn, lex } => {
            overrides.clusters = clusters.clone();
            overrides.model = model.clone();
            overrides.grid = [sem.clone(), syn.clone(), lex.clone()];
        }
        Command::Generate { clusters, model, .. } => {
            overrides.clusters = clusters.clone();
            overrides.model = model.clone();
        }
        Command::TrainQp { .. } | Command::Select { .. } => {}
    }
    let config = Config::load(c.config.as_deref(), overrides)?;
    match cli.command {
        Command::Score { pairs, source_trees, target_trees, .. } => {
            commands::score(&config, &commands::ScoreInput { pairs, source_trees, target_trees })
        }
        Command::Split { train, dev, test, quota_mode, extract_mode, .. } => commands::split(
            &config,
            &commands::SplitInput { sizes: SplitSizes { train, dev, test }, quota_mode, extract_mode },
        ),
        Command::TrainQp { train, dev, lambda } => {
            commands::train_qp(&config, &commands::TrainInput { train, dev, lambdas: lambda })
        }
        Command::PredictQp { sentences, .. } => commands::predict_qp(&config, &sentences),
        Command::Grid { .. } => commands::grid(&config),
        Command::Select { heatmap, baseline_sem, margin } => commands::select(&config, &heatmap, baseline_sem, margin),
        Command::Generate { sentences, point, offset, .. } => {
            let source = match (point, offset) {
                (Some(p), _) => OffsetSource::Point(p),
                (None, Some(o)) => OffsetSource::Literal(o),
                (None, None) => return Err(CliError::Usage("give --point or --offset".into())),
            };
            commands::generate(&config, &source, sentences.as_deref())
        }
        Command::Eval { systems, references, .. } => {
            commands::eval(&config, &commands::EvalInput { systems, references })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
