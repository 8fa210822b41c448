//! Corpus evaluation: sentence BLEU, Self-BLEU, per-system quality tables and Kendall's tau-b.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::quality::{quality_batch, AnalyzedSentence, QualityError, QualityVector};
use crate::semantic::SemanticScorer;

pub const BLEU_MAX_ORDER: usize = 4;
pub const REPORT_HEADER: &str = "system\tsem\tsyn\tlex\tself_bleu\tbleu\tn";

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("at least one reference is required")]
    NoReferences,
    #[error("length mismatch: {what} has {found} entries, expected {expected}")]
    LengthMismatch { what: String, expected: usize, found: usize },
    #[error("nothing to evaluate")]
    EmptyCorpus,
    #[error("kendall tau needs at least two observations")]
    TooFewObservations,
    #[error("kendall tau is undefined when one ranking is entirely tied")]
    AllTied,
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error(transparent)]
    Quality(#[from] QualityError),
}

fn ngram_counts<'a>(tokens: &'a [&'a str], n: usize) -> HashMap<&'a [&'a str], usize> {
    let mut counts = HashMap::new();
    for gram in tokens.windows(n) {
        *counts.entry(gram).or_insert(0) += 1;
    }
    counts
}

/// Sentence-level BLEU-4 on whitespace tokens, 0 to 100.
///
/// Precisions for orders 2 to 4 with no match become `1 / (total + 1)`; a unigram
/// precision of zero makes the score zero. An empty candidate scores 0.
pub fn bleu<S: AsRef<str>>(candidate: &str, references: &[S]) -> Result<f64, EvalError> {
    if references.is_empty() {
        return Err(EvalError::NoReferences);
    }
    let cand: Vec<&str> = candidate.split_whitespace().collect();
    if cand.is_empty() {
        return Ok(0.0);
    }
    let refs: Vec<Vec<&str>> = references.iter().map(|r| r.as_ref().split_whitespace().collect()).collect();

    let mut log_sum = 0.0;
    for n in 1..=BLEU_MAX_ORDER {
        let cand_counts = ngram_counts(&cand, n);
        let mut max_ref: HashMap<&[&str], usize> = HashMap::new();
        for r in &refs {
            for (gram, count) in ngram_counts(r, n) {
                let slot = max_ref.entry(gram).or_insert(0);
                *slot = (*slot).max(count);
            }
        }
        let matched: usize = cand_counts.iter().map(|(g, &c)| c.min(max_ref.get(g).copied().unwrap_or(0))).sum();
        let total = cand.len().saturating_sub(n - 1);
        let p = if matched > 0 {
            matched as f64 / total as f64
        } else if n == 1 {
            return Ok(0.0);
        } else {
            1.0 / (total as f64 + 1.0)
        };
        log_sum += p.ln();
    }

    let c = cand.len();
    let r = refs.iter().map(Vec::len).min_by_key(|&len| (len.abs_diff(c), len)).expect("non-empty references");
    let bp = if c < r { (1.0 - r as f64 / c as f64).exp() } else { 1.0 };
    Ok(100.0 * bp * (log_sum / BLEU_MAX_ORDER as f64).exp())
}

/// `bleu(generated, [source])`; lower means less copying.
pub fn self_bleu(generated: &str, source: &str) -> f64 {
    bleu(generated, &[source]).expect("one reference")
}

/// Mean sentence Self-BLEU over `(generated, source)` pairs.
pub fn corpus_self_bleu<G: AsRef<str>, S: AsRef<str>>(pairs: &[(G, S)]) -> Result<f64, EvalError> {
    if pairs.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    Ok(pairs.iter().map(|(g, s)| self_bleu(g.as_ref(), s.as_ref())).sum::<f64>() / pairs.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemRow {
    pub system: String,
    pub quality: QualityVector,
    pub self_bleu: f64,
    pub bleu: Option<f64>,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct EvalReport {
    pub rows: Vec<SystemRow>,
}

impl EvalReport {
    /// Tab-separated table with 2-decimal values; a missing BLEU column is written as `-`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from(REPORT_HEADER);
        out.push('\n');
        for r in &self.rows {
            let bleu = r.bleu.map_or_else(|| "-".to_string(), |b| format!("{b:.2}"));
            let _ = writeln!(
                out,
                "{}\t{:.2}\t{:.2}\t{:.2}\t{:.2}\t{}\t{}",
                r.system, r.quality.sem, r.quality.syn, r.quality.lex, r.self_bleu, bleu, r.n
            );
        }
        out
    }
}

/// A named list of outputs aligned with the source list.
#[derive(Debug, Clone)]
pub struct SystemOutputs {
    pub name: String,
    pub outputs: Vec<AnalyzedSentence>,
}

/// Mean quality, mean Self-BLEU and, when references are given, mean BLEU per system.
pub fn evaluate_systems(
    systems: &[SystemOutputs],
    sources: &[AnalyzedSentence],
    references: Option<&[Vec<String>]>,
    scorer: &SemanticScorer,
) -> Result<EvalReport, EvalError> {
    if systems.is_empty() {
        return Ok(EvalReport::default());
    }
    if sources.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    if let Some(refs) = references {
        check_len("references", sources.len(), refs.len())?;
    }
    let mut rows = Vec::with_capacity(systems.len());
    for system in systems {
        check_len(&system.name, sources.len(), system.outputs.len())?;
        let pairs: Vec<(&AnalyzedSentence, &AnalyzedSentence)> = sources.iter().zip(&system.outputs).collect();
        let qualities = quality_batch(scorer, &pairs)?;
        let n = qualities.len() as f64;
        let mut sums = [0.0; 3];
        for q in &qualities {
            for (s, v) in sums.iter_mut().zip(q.to_array()) {
                *s += v;
            }
        }
        let self_bleu =
            sources.iter().zip(&system.outputs).map(|(s, g)| self::self_bleu(g.text(), s.text())).sum::<f64>() / n;
        let bleu = match references {
            Some(refs) => {
                let mut total = 0.0;
                for (g, r) in system.outputs.iter().zip(refs) {
                    total += bleu(g.text(), r)?;
                }
                Some(total / n)
            }
            None => None,
        };
        rows.push(SystemRow {
            system: system.name.clone(),
            quality: QualityVector::from_array(sums.map(|s| s / n)),
            self_bleu,
            bleu,
            n: qualities.len(),
        });
    }
    Ok(EvalReport { rows })
}

fn check_len(what: &str, expected: usize, found: usize) -> Result<(), EvalError> {
    if expected == found {
        Ok(())
    } else {
        Err(EvalError::LengthMismatch { what: what.to_string(), expected, found })
    }
}

/// Kendall's tau-b in O(n log n).
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<f64, EvalError> {
    check_len("y", x.len(), y.len())?;
    if x.len() < 2 {
        return Err(EvalError::TooFewObservations);
    }
    if let Some(i) = x.iter().zip(y).position(|(a, b)| !a.is_finite() || !b.is_finite()) {
        return Err(EvalError::NonFinite(i));
    }
    let n = x.len() as u64;
    let total = n * (n - 1) / 2;

    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let tied_x = tied_pairs(pairs.iter().map(|p| p.0));
    let tied_xy = tied_pairs_by(&pairs, |a, b| a == b);

    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut buf = vec![0.0; ys.len()];
    let swaps = merge_count(&mut ys, &mut buf);
    let tied_y = tied_pairs(ys.iter().copied());

    let denom = ((total - tied_x) as f64 * (total - tied_y) as f64).sqrt();
    if denom == 0.0 {
        return Err(EvalError::AllTied);
    }
    let numer = total as i64 - tied_x as i64 - tied_y as i64 + tied_xy as i64 - 2 * swaps as i64;
    Ok(numer as f64 / denom)
}

fn tied_pairs(sorted: impl Iterator<Item = f64>) -> u64 {
    let v: Vec<f64> = sorted.collect();
    tied_pairs_by(&v, |a, b| a == b)
}

fn tied_pairs_by<T>(sorted: &[T], eq: impl Fn(&T, &T) -> bool) -> u64 {
    let mut ties = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if eq(&w[0], &w[1]) {
            run += 1;
        } else {
            ties += run * (run - 1) / 2;
            run = 1;
        }
    }
    ties + run * (run - 1) / 2
}

/// Stable merge sort returning the number of strictly inverted pairs.
fn merge_count(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = merge_count(&mut v[..mid], &mut buf[..mid]) + merge_count(&mut v[mid..], &mut buf[mid..]);
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}
