//! Cluster-structured paraphrase corpora: loading, pair extraction, subsampling and
//! leakage-free train/dev/test splitting.
//!
//! A cluster is a group of sentences annotated as mutual paraphrases. Splits always
//! move whole clusters, so no cluster contributes pairs to more than one split.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seed::{self, Subsystem};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: malformed record: {message}")]
    MalformedRecord { line: usize, message: String },
    #[error("line {line}: {trees} trees for {sentences} sentences")]
    TreeLengthMismatch { line: usize, sentences: usize, trees: usize },
    #[error(
        "not enough pairs for the requested split sizes: requested train/dev/test = {requested:?}, achievable = {achievable:?}"
    )]
    InsufficientData { requested: [usize; 3], achievable: [usize; 3] },
    #[error("unknown pair mode {0:?} (expected all_ordered, all_unordered or star_first)")]
    UnknownPairMode(String),
}

/// A group of sentences that paraphrase each other, with optional aligned parse trees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cluster {
    pub cluster_id: String,
    pub sentences: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trees: Option<Vec<String>>,
}

impl Cluster {
    /// Tree text for slot `i`; blank entries count as missing.
    pub fn tree(&self, i: usize) -> Option<&str> {
        self.trees.as_ref()?.get(i).map(String::as_str).filter(|t| !t.trim().is_empty())
    }

    pub fn pair_count(&self, mode: PairMode) -> usize {
        let n = self.sentences.len();
        match mode {
            PairMode::AllOrdered => n * n.saturating_sub(1),
            PairMode::AllUnordered => n * n.saturating_sub(1) / 2,
            PairMode::StarFirst => n.saturating_sub(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentencePair {
    pub source: String,
    pub target: String,
    pub cluster_id: String,
    pub source_tree: Option<String>,
    pub target_tree: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairMode {
    /// Every ordered pair of distinct slots.
    AllOrdered,
    /// Every unordered pair once, lower slot first.
    #[default]
    AllUnordered,
    /// The first sentence paired with each of the others.
    StarFirst,
}

impl FromStr for PairMode {
    type Err = DatasetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all_ordered" => Ok(Self::AllOrdered),
            "all_unordered" => Ok(Self::AllUnordered),
            "star_first" => Ok(Self::StarFirst),
            _ => Err(DatasetError::UnknownPairMode(s.to_string())),
        }
    }
}

/// Requested pair counts per split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SplitSizes {
    pub train: usize,
    pub dev: usize,
    pub test: usize,
}

/// Whole clusters assigned to each split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterPartition {
    pub train: Vec<Cluster>,
    pub dev: Vec<Cluster>,
    pub test: Vec<Cluster>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSplit {
    pub train: Vec<SentencePair>,
    pub dev: Vec<SentencePair>,
    pub test: Vec<SentencePair>,
    pub seed: u64,
}

fn check_text(line: usize, what: &str, s: &str) -> Result<(), DatasetError> {
    if s.contains(['\t', '\n', '\r']) {
        return Err(DatasetError::MalformedRecord {
            line,
            message: format!("{what} contains a tab or newline"),
        });
    }
    Ok(())
}

fn validate(line: usize, cluster: &Cluster) -> Result<(), DatasetError> {
    if cluster.sentences.is_empty() {
        return Err(DatasetError::MalformedRecord { line, message: "cluster has no sentences".into() });
    }
    check_text(line, "cluster_id", &cluster.cluster_id)?;
    for s in &cluster.sentences {
        check_text(line, "sentence", s)?;
    }
    if let Some(trees) = &cluster.trees {
        if trees.len() != cluster.sentences.len() {
            return Err(DatasetError::TreeLengthMismatch {
                line,
                sentences: cluster.sentences.len(),
                trees: trees.len(),
            });
        }
        for t in trees {
            check_text(line, "tree", t)?;
        }
    }
    Ok(())
}

/// Reads one JSON cluster object per line. Blank lines are skipped.
pub fn read_clusters<R: Read>(reader: R) -> Result<Vec<Cluster>, DatasetError> {
    let mut clusters = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| DatasetError::MalformedRecord { line: line_no, message: e.to_string() })?;
        if line.trim().is_empty() {
            continue;
        }
        let cluster: Cluster = serde_json::from_str(&line)
            .map_err(|e| DatasetError::MalformedRecord { line: line_no, message: e.to_string() })?;
        validate(line_no, &cluster)?;
        clusters.push(cluster);
    }
    Ok(clusters)
}

pub fn load_clusters(path: impl AsRef<Path>) -> Result<Vec<Cluster>, DatasetError> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|source| DatasetError::Io { path: path.display().to_string(), source })?;
    read_clusters(file)
}

pub fn clusters_to_jsonl(clusters: &[Cluster]) -> String {
    let mut out = String::new();
    for c in clusters {
        out.push_str(&serde_json::to_string(c).expect("clusters always serialize"));
        out.push('\n');
    }
    out
}

fn slot_pairs(n: usize, mode: PairMode) -> Vec<(usize, usize)> {
    match mode {
        PairMode::AllOrdered => (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect(),
        PairMode::AllUnordered => (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect(),
        PairMode::StarFirst => (1..n).map(|j| (0, j)).collect(),
    }
}

pub fn extract_pairs(clusters: &[Cluster], mode: PairMode) -> Vec<SentencePair> {
    let mut pairs = Vec::new();
    for c in clusters {
        for (i, j) in slot_pairs(c.sentences.len(), mode) {
            pairs.push(SentencePair {
                source: c.sentences[i].clone(),
                target: c.sentences[j].clone(),
                cluster_id: c.cluster_id.clone(),
                source_tree: c.tree(i).map(str::to_string),
                target_tree: c.tree(j).map(str::to_string),
            });
        }
    }
    pairs
}

fn shuffled(clusters: &[Cluster], seed: u64, subsystem: Subsystem) -> Vec<&Cluster> {
    let mut order: Vec<&Cluster> = clusters.iter().collect();
    order.shuffle(&mut seed::stream(seed, subsystem, b""));
    order
}

/// Assigns whole clusters to test, then dev, then train, in seeded random order, moving
/// on once a split's pair quota is met.
pub fn partition_clusters(
    clusters: &[Cluster],
    sizes: SplitSizes,
    seed: u64,
    mode: PairMode,
) -> Result<ClusterPartition, DatasetError> {
    let quotas = [sizes.test, sizes.dev, sizes.train];
    let mut buckets: [Vec<Cluster>; 3] = Default::default();
    let mut counts = [0usize; 3];
    let mut current = 0;
    for cluster in shuffled(clusters, seed, Subsystem::Split) {
        while current < 3 && counts[current] >= quotas[current] {
            current += 1;
        }
        if current == 3 {
            break;
        }
        counts[current] += cluster.pair_count(mode);
        buckets[current].push(cluster.clone());
    }
    if counts.iter().zip(&quotas).any(|(c, q)| c < q) {
        return Err(DatasetError::InsufficientData {
            requested: [sizes.train, sizes.dev, sizes.test],
            achievable: [counts[2], counts[1], counts[0]],
        });
    }
    let [test, dev, train] = buckets;
    Ok(ClusterPartition { train, dev, test, seed })
}

pub fn split_clusters(
    clusters: &[Cluster],
    sizes: SplitSizes,
    seed: u64,
    mode: PairMode,
) -> Result<DatasetSplit, DatasetError> {
    let part = partition_clusters(clusters, sizes, seed, mode)?;
    Ok(DatasetSplit {
        train: extract_pairs(&part.train, mode),
        dev: extract_pairs(&part.dev, mode),
        test: extract_pairs(&part.test, mode),
        seed,
    })
}

/// Seeded random whole-cluster subsample holding at least `n_pairs` unordered pairs
/// (or the whole corpus, if it is smaller).
pub fn subsample(clusters: &[Cluster], n_pairs: usize, seed: u64) -> Vec<Cluster> {
    let mut out = Vec::new();
    let mut total = 0;
    for cluster in shuffled(clusters, seed, Subsystem::Subsample) {
        if total >= n_pairs {
            break;
        }
        total += cluster.pair_count(PairMode::AllUnordered);
        out.push(cluster.clone());
    }
    out
}

/// Cluster ids shared by at least two of the splits; empty for every valid split.
pub fn leaked_clusters(split: &DatasetSplit) -> Vec<String> {
    let ids = |pairs: &[SentencePair]| pairs.iter().map(|p| p.cluster_id.clone()).collect::<HashSet<_>>();
    let (a, b, c) = (ids(&split.train), ids(&split.dev), ids(&split.test));
    let mut leaked: Vec<String> =
        a.intersection(&b).chain(a.intersection(&c)).chain(b.intersection(&c)).cloned().collect();
    leaked.sort();
    leaked.dedup();
    leaked
}

/// `source<TAB>target<TAB>cluster_id[<TAB>source_tree<TAB>target_tree]` per pair.
/// Tree columns are written when either tree is known.
pub fn pairs_to_tsv(pairs: &[SentencePair]) -> String {
    let mut out = String::new();
    for p in pairs {
        let _ = write!(out, "{}\t{}\t{}", p.source, p.target, p.cluster_id);
        if p.source_tree.is_some() || p.target_tree.is_some() {
            let _ = write!(
                out,
                "\t{}\t{}",
                p.source_tree.as_deref().unwrap_or(""),
                p.target_tree.as_deref().unwrap_or("")
            );
        }
        out.push('\n');
    }
    out
}

/// Parses the pair TSV format written by [`pairs_to_tsv`].
pub fn read_pairs_tsv<R: Read>(reader: R) -> Result<Vec<SentencePair>, DatasetError> {
    let mut pairs = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| DatasetError::MalformedRecord { line: line_no, message: e.to_string() })?;
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let tree = |s: &str| Some(s.to_string()).filter(|t| !t.trim().is_empty());
        let pair = match cols.as_slice() {
            [s, t, id] => SentencePair {
                source: s.to_string(),
                target: t.to_string(),
                cluster_id: id.to_string(),
                source_tree: None,
                target_tree: None,
            },
            [s, t, id, ts, tt] => SentencePair {
                source: s.to_string(),
                target: t.to_string(),
                cluster_id: id.to_string(),
                source_tree: tree(ts),
                target_tree: tree(tt),
            },
            _ => {
                return Err(DatasetError::MalformedRecord {
                    line: line_no,
                    message: format!("expected 3 or 5 tab-separated columns, found {}", cols.len()),
                })
            }
        };
        pairs.push(pair);
    }
    Ok(pairs)
}
