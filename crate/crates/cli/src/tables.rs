//! Text formats read and written by the commands.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use qcpg_core::dataset::{Cluster, SentencePair};
use qcpg_core::quality::QualityVector;
use qcpg_core::tree_metrics::{parse_bracketed, parse_sidecar_line, ParseTree};

use crate::error::CliError;

pub const SCORED_HEADER: &str = "source\ttarget\tcluster_id\tsource_tree\ttarget_tree\tq_sem\tq_syn\tq_lex";
pub const PREDICTION_HEADER: &str = "sentence\tr_sem\tr_syn\tr_lex";
pub const GENERATED_HEADER: &str = "source\tcontrol\tparaphrase";

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Writes `content` to `out`, or to standard output when no path is given.
pub fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| CliError::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes()).and_then(|()| stdout.flush()).map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

pub fn read_lines(path: &Path) -> Result<Vec<String>, CliError> {
    Ok(read_text(path)?.lines().map(str::to_string).collect())
}

/// Tree sidecar: one bracketed tree per line, blank for a missing parse.
pub fn read_sidecar(path: &Path) -> Result<Vec<Option<ParseTree>>, CliError> {
    read_lines(path)?
        .iter()
        .enumerate()
        .map(|(i, line)| {
            parse_sidecar_line(line).map_err(|e| CliError::input(format!("{}:{}: {e}", path.display(), i + 1)))
        })
        .collect()
}

/// Parse trees looked up by exact sentence text.
#[derive(Debug, Default)]
pub struct TreeLookup {
    trees: HashMap<String, ParseTree>,
}

impl TreeLookup {
    pub fn add_clusters(&mut self, clusters: &[Cluster]) -> Result<(), CliError> {
        for c in clusters {
            for (i, s) in c.sentences.iter().enumerate() {
                if let Some(text) = c.tree(i) {
                    let tree = parse_bracketed(text)
                        .map_err(|e| CliError::input(format!("cluster {}, slot {i}: {e}", c.cluster_id)))?;
                    self.trees.entry(s.clone()).or_insert(tree);
                }
            }
        }
        Ok(())
    }

    /// `sentence<TAB>tree` lines.
    pub fn add_tsv(&mut self, path: &Path) -> Result<(), CliError> {
        for (i, line) in read_lines(path)?.iter().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (s, t) = line
                .split_once('\t')
                .ok_or_else(|| CliError::input(format!("{}:{}: expected sentence<TAB>tree", path.display(), i + 1)))?;
            let tree = parse_bracketed(t).map_err(|e| CliError::input(format!("{}:{}: {e}", path.display(), i + 1)))?;
            self.trees.insert(s.to_string(), tree);
        }
        Ok(())
    }

    pub fn get(&self, sentence: &str) -> Option<&ParseTree> {
        self.trees.get(sentence)
    }
}

pub fn scored_tsv(rows: &[(SentencePair, QualityVector)]) -> String {
    let mut out = format!("{SCORED_HEADER}\n");
    for (p, q) in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{:.4}\t{:.4}\t{:.4}\n",
            p.source,
            p.target,
            p.cluster_id,
            p.source_tree.as_deref().unwrap_or(""),
            p.target_tree.as_deref().unwrap_or(""),
            q.sem,
            q.syn,
            q.lex
        ));
    }
    out
}

/// `(source, q)` training samples from a scored TSV.
pub fn read_scored(path: &Path) -> Result<Vec<(String, QualityVector)>, CliError> {
    let text = read_text(path)?;
    let mut lines = text.lines();
    if lines.next() != Some(SCORED_HEADER) {
        return Err(CliError::input(format!("{}: missing scored-pairs header", path.display())));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let bad = |m: &str| CliError::input(format!("{}:{}: {m}", path.display(), i + 2));
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 8 {
            return Err(bad(&format!("expected 8 columns, found {}", cols.len())));
        }
        let v: Vec<f64> = cols[5..].iter().map(|c| c.parse::<f64>()).collect::<Result<_, _>>().map_err(|e| bad(&e.to_string()))?;
        let q = QualityVector::new(v[0], v[1], v[2]).map_err(|e| bad(&e.to_string()))?;
        rows.push((cols[0].to_string(), q));
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedRow {
    pub source: String,
    pub control: String,
    pub paraphrase: String,
}

pub fn generated_tsv(rows: &[GeneratedRow]) -> String {
    let mut out = format!("{GENERATED_HEADER}\n");
    for r in rows {
        out.push_str(&format!("{}\t{}\t{}\n", r.source, r.control, r.paraphrase));
    }
    out
}

pub fn read_generated(path: &Path) -> Result<Vec<GeneratedRow>, CliError> {
    let text = read_text(path)?;
    let mut lines = text.lines();
    if lines.next() != Some(GENERATED_HEADER) {
        return Err(CliError::input(format!("{}: missing paraphrase header", path.display())));
    }
    lines
        .enumerate()
        .map(|(i, line)| match line.split('\t').collect::<Vec<_>>().as_slice() {
            [s, c, p] => Ok(GeneratedRow { source: s.to_string(), control: c.to_string(), paraphrase: p.to_string() }),
            cols => Err(CliError::input(format!("{}:{}: expected 3 columns, found {}", path.display(), i + 2, cols.len()))),
        })
        .collect()
}

/// One line per source row; tab-separated alternatives.
pub fn read_references(path: &Path) -> Result<Vec<Vec<String>>, CliError> {
    Ok(read_lines(path)?.iter().map(|l| l.split('\t').map(str::to_string).collect()).collect())
}
