use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::{info, warn};
use qcpg_core::dataset::{
    clusters_to_jsonl, extract_pairs, load_clusters, pairs_to_tsv, partition_clusters, read_pairs_tsv, Cluster,
    PairMode, SentencePair, SplitSizes,
};
use qcpg_core::evaluation::{evaluate_systems, SystemOutputs};
use qcpg_core::generator::{external_generate, ClusterContext, Generator, GeneratorSpec};
use qcpg_core::quality::{apply_offset, encode_control, quality_batch, AnalyzedSentence, Offset, QualityVector};
use qcpg_core::reference::{evaluate_mse, fit, mean_predictor_mse, ReferenceModel};
use qcpg_core::selection::{
    dev_items, export_heatmap_csv, heatmap_csv, parse_heatmap_csv, select_operation_point, GridContext,
    SemConstraint,
};
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::CliError;
use crate::tables::{self, GeneratedRow, TreeLookup};

pub struct ScoreInput {
    pub pairs: PathBuf,
    pub source_trees: Option<PathBuf>,
    pub target_trees: Option<PathBuf>,
}

pub fn score(config: &Config, input: &ScoreInput) -> Result<(), CliError> {
    let pairs = read_pairs(&input.pairs)?;
    let sidecar = |p: &Option<PathBuf>| -> Result<Option<Vec<_>>, CliError> {
        let Some(path) = p else { return Ok(None) };
        let trees = tables::read_sidecar(path)?;
        if trees.len() != pairs.len() {
            return Err(CliError::input(format!(
                "{} has {} lines for {} pairs",
                path.display(),
                trees.len(),
                pairs.len()
            )));
        }
        Ok(Some(trees))
    };
    let (src_side, tgt_side) = (sidecar(&input.source_trees)?, sidecar(&input.target_trees)?);
    let lookup = lookup_from_config(config)?;
    let inline = |text: Option<&str>, line: usize| -> Result<Option<qcpg_core::ParseTree>, CliError> {
        text.map(|t| qcpg_core::tree_metrics::parse_bracketed(t).map_err(|e| CliError::input(format!("pair {line}: {e}"))))
            .transpose()
    };
    let mut kept = Vec::new();
    let mut analyzed = Vec::new();
    for (i, p) in pairs.iter().enumerate() {
        let resolve = |side: &Option<Vec<Option<qcpg_core::ParseTree>>>, text: Option<&str>, sentence: &str| {
            Ok::<_, CliError>(match side {
                Some(trees) => trees[i].clone(),
                None => inline(text, i + 1)?.or_else(|| lookup.get(sentence).cloned()),
            })
        };
        let ts = resolve(&src_side, p.source_tree.as_deref(), &p.source)?;
        let tt = resolve(&tgt_side, p.target_tree.as_deref(), &p.target)?;
        match (ts, tt) {
            (Some(a), Some(b)) => {
                analyzed.push((AnalyzedSentence::new(p.source.clone(), &a), AnalyzedSentence::new(p.target.clone(), &b)));
                kept.push(p.clone());
            }
            _ => warn!("pair {}: missing parse tree, skipped", i + 1),
        }
    }
    let refs: Vec<_> = analyzed.iter().map(|(a, b)| (a, b)).collect();
    let qs = quality_batch(&config.scorer, &refs)?;
    info!("scored {} of {} pairs", kept.len(), pairs.len());
    let rows: Vec<(SentencePair, QualityVector)> = kept.into_iter().zip(qs).collect();
    tables::emit(config.out.as_deref(), &tables::scored_tsv(&rows))
}

fn read_pairs(path: &Path) -> Result<Vec<SentencePair>, CliError> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    read_pairs_tsv(file).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn lookup_from_config(config: &Config) -> Result<TreeLookup, CliError> {
    let mut lookup = TreeLookup::default();
    if let Some(path) = &config.clusters {
        lookup.add_clusters(&load_clusters(path)?)?;
    }
    if let Some(path) = &config.trees {
        lookup.add_tsv(path)?;
    }
    Ok(lookup)
}

pub struct SplitInput {
    pub sizes: SplitSizes,
    pub quota_mode: PairMode,
    pub extract_mode: PairMode,
}

pub fn split(config: &Config, input: &SplitInput) -> Result<(), CliError> {
    let clusters = load_clusters(Config::require(&config.clusters, "cluster file")?)?;
    let out = Config::require(&config.out, "output directory (--out)")?;
    let part = partition_clusters(&clusters, input.sizes, config.seed, input.quota_mode)?;
    let ids = |cs: &[Cluster]| cs.iter().map(|c| c.cluster_id.clone()).collect::<std::collections::HashSet<_>>();
    let (a, b, c) = (ids(&part.train), ids(&part.dev), ids(&part.test));
    if !(a.is_disjoint(&b) && a.is_disjoint(&c) && b.is_disjoint(&c)) {
        return Err(CliError::Internal("split shares a cluster id across partitions".into()));
    }
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    for (name, cs) in [("train", &part.train), ("dev", &part.dev), ("test", &part.test)] {
        let pairs = extract_pairs(cs, input.extract_mode);
        info!("{name}: {} clusters, {} pairs", cs.len(), pairs.len());
        let tsv = out.join(format!("{name}.tsv"));
        std::fs::write(&tsv, pairs_to_tsv(&pairs)).map_err(|e| CliError::io(&tsv, e))?;
        let jsonl = out.join(format!("{name}.jsonl"));
        std::fs::write(&jsonl, clusters_to_jsonl(cs)).map_err(|e| CliError::io(&jsonl, e))?;
    }
    Ok(())
}

pub struct TrainInput {
    pub train: PathBuf,
    pub dev: Option<PathBuf>,
    pub lambdas: Vec<f64>,
}

pub fn train_qp(config: &Config, input: &TrainInput) -> Result<(), CliError> {
    let out = config
        .out
        .as_deref()
        .or(config.model.as_deref())
        .ok_or_else(|| CliError::Usage("missing model output path (--out)".into()))?;
    let train = tables::read_scored(&input.train)?;
    let dev = input.dev.as_deref().map(tables::read_scored).transpose()?;
    let mut best: Option<(f64, ReferenceModel)> = None;
    for &lambda in &input.lambdas {
        let model = fit(&train, lambda)?;
        let score = match &dev {
            Some(dev) => {
                let mse = evaluate_mse(&model, dev)?;
                let base = mean_predictor_mse(&train, dev)?;
                eprintln!(
                    "lambda {lambda}: dev MSE sem {:.4} syn {:.4} lex {:.4} (mean predictor {:.4} {:.4} {:.4})",
                    mse[0], mse[1], mse[2], base[0], base[1], base[2]
                );
                mse.iter().sum::<f64>() / 3.0
            }
            None => 0.0,
        };
        if best.as_ref().is_none_or(|(s, _)| score < *s) {
            best = Some((score, model));
        }
    }
    let (_, model) = best.ok_or_else(|| CliError::Usage("no lambda given".into()))?;
    if input.lambdas.len() > 1 {
        eprintln!("selected lambda {}", model.lambda());
    }
    model.save(out)?;
    Ok(())
}

pub fn predict_qp(config: &Config, sentences: &Path) -> Result<(), CliError> {
    let model = load_model(config)?;
    let mut out = format!("{}\n", tables::PREDICTION_HEADER);
    for s in tables::read_lines(sentences)? {
        let r = model.predict(&s);
        out.push_str(&format!("{s}\t{:.4}\t{:.4}\t{:.4}\n", r.sem, r.syn, r.lex));
    }
    tables::emit(config.out.as_deref(), &out)
}

fn load_model(config: &Config) -> Result<ReferenceModel, CliError> {
    Ok(ReferenceModel::load(Config::require(&config.model, "model file (--model)")?)?)
}

pub fn grid(config: &Config) -> Result<(), CliError> {
    let clusters = load_clusters(Config::require(&config.clusters, "dev cluster file (--clusters)")?)?;
    let model = load_model(config)?;
    let dev = dev_items(&clusters)?;
    let generator = Generator::new(config.generator.clone(), config.seed);
    let offsets = config.grid.offsets();
    info!("grid: {} offsets over {} dev sentences with {}", offsets.len(), dev.len(), config.generator);
    let result = GridContext::prepare(&generator, &model, &dev, &config.scorer)?.grid_search(&offsets)?;
    for o in &result.dropped {
        warn!("offset ({}, {}, {}) dropped: every generation failed", o.sem, o.syn, o.lex);
    }
    info!("dev quality std: sem {:.4} syn {:.4} lex {:.4}", result.dim_std[0], result.dim_std[1], result.dim_std[2]);
    match &config.out {
        Some(path) => export_heatmap_csv(&result, path)?,
        None => tables::emit(None, &heatmap_csv(&result))?,
    }
    Ok(())
}

/// Operation point file written by `select` and read by `generate`.
#[derive(Debug, Serialize, Deserialize)]
pub struct PointFile {
    pub offset: Offset,
    pub expected: QualityVector,
    pub diversity: f64,
    pub baseline_sem: f64,
    pub margin: f64,
}

pub fn select(config: &Config, heatmap: &Path, baseline_sem: f64, margin: f64) -> Result<(), CliError> {
    let rows = parse_heatmap_csv(&tables::read_text(heatmap)?)?;
    let point = select_operation_point(&rows, &SemConstraint { min_sem_advantage: margin, baseline_sem })?;
    let file = PointFile { offset: point.offset, expected: point.expected, diversity: point.diversity, baseline_sem, margin };
    let json = serde_json::to_string_pretty(&file).map_err(|e| CliError::Internal(e.to_string()))?;
    tables::emit(config.out.as_deref(), &(json + "\n"))
}

pub enum OffsetSource {
    Point(PathBuf),
    Literal(Offset),
}

pub fn parse_offset(s: &str) -> Result<Offset, String> {
    let v: Vec<f64> = s.split(',').map(|x| x.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    match v.as_slice() {
        &[a, b, c] if v.iter().all(|x| x.is_finite()) => Ok(Offset::new(a, b, c)),
        _ => Err(format!("expected sem,syn,lex, got {s:?}")),
    }
}

pub fn generate(config: &Config, offset: &OffsetSource, sentences: Option<&Path>) -> Result<(), CliError> {
    let model = load_model(config)?;
    let offset = match offset {
        OffsetSource::Literal(o) => *o,
        OffsetSource::Point(path) => {
            let p: PointFile = serde_json::from_str(&tables::read_text(path)?)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            p.offset
        }
    };
    let clusters = match &config.clusters {
        Some(path) => load_clusters(path)?,
        None => Vec::new(),
    };
    let sources: Vec<String> = match sentences {
        Some(path) => tables::read_lines(path)?,
        None => clusters.iter().flat_map(|c| c.sentences.iter().cloned()).collect(),
    };
    let controls = sources.iter().map(|s| apply_offset(&model.predict(s), &offset)).collect::<Result<Vec<_>, _>>()?;
    let generator = Generator::new(config.generator.clone(), config.seed);
    let outputs: Vec<Option<String>> = match &config.generator {
        GeneratorSpec::External { command } => {
            let batch: Vec<(&str, _)> = sources.iter().map(String::as_str).zip(controls.iter().copied()).collect();
            external_generate(command, &batch)?.into_iter().map(Some).collect()
        }
        spec => {
            let mut contexts: HashMap<&str, Arc<ClusterContext>> = HashMap::new();
            if !matches!(spec, GeneratorSpec::Identity) {
                for c in &clusters {
                    let ctx = Arc::new(ClusterContext::from_cluster(c)?);
                    for s in &c.sentences {
                        contexts.entry(s.as_str()).or_insert_with(|| Arc::clone(&ctx));
                    }
                }
            }
            let mut out = Vec::with_capacity(sources.len());
            for (s, &c) in sources.iter().zip(&controls) {
                match generator.generate(s, c, contexts.get(s.as_str()).map(Arc::as_ref), &config.scorer) {
                    Ok(t) => out.push(Some(t)),
                    Err(e) => {
                        warn!("{s:?}: {e}");
                        out.push(None);
                    }
                }
            }
            out
        }
    };
    let rows: Vec<GeneratedRow> = sources
        .iter()
        .zip(&controls)
        .zip(outputs)
        .filter_map(|((s, c), t)| {
            Some(GeneratedRow { source: s.clone(), control: encode_control(c), paraphrase: t? })
        })
        .collect();
    if rows.len() < sources.len() {
        warn!("{} of {} sentences produced no paraphrase", sources.len() - rows.len(), sources.len());
    }
    tables::emit(config.out.as_deref(), &tables::generated_tsv(&rows))
}

pub struct EvalInput {
    pub systems: Vec<(String, PathBuf)>,
    pub references: Option<PathBuf>,
}

pub fn eval(config: &Config, input: &EvalInput) -> Result<(), CliError> {
    let lookup = lookup_from_config(config)?;
    let analyze = |text: &str, what: &str| -> Result<AnalyzedSentence, CliError> {
        let tree = lookup
            .get(text)
            .ok_or_else(|| CliError::input(format!("no parse tree for {what} {text:?} (supply --clusters or --trees)")))?;
        Ok(AnalyzedSentence::new(text, tree))
    };
    let mut sources: Option<Vec<String>> = None;
    let mut systems = Vec::new();
    for (name, path) in &input.systems {
        let rows = tables::read_generated(path)?;
        let src: Vec<String> = rows.iter().map(|r| r.source.clone()).collect();
        match &sources {
            None => sources = Some(src),
            Some(expected) if *expected != src => {
                return Err(CliError::input(format!("system {name}: source column differs from the first system")))
            }
            Some(_) => {}
        }
        let outputs = rows.iter().map(|r| analyze(&r.paraphrase, "output")).collect::<Result<_, _>>()?;
        systems.push(SystemOutputs { name: name.clone(), outputs });
    }
    let sources = sources.unwrap_or_default();
    let analyzed_sources = sources.iter().map(|s| analyze(s, "source")).collect::<Result<Vec<_>, _>>()?;
    let references = input.references.as_deref().map(tables::read_references).transpose()?;
    let report = evaluate_systems(&systems, &analyzed_sources, references.as_deref(), &config.scorer)?;
    tables::emit(config.out.as_deref(), &report.to_tsv())
}
