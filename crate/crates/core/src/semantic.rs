//! Semantic similarity: a raw pairwise score squashed through the logistic sigmoid.
//!
//! The raw score comes either from the built-in character-trigram scorer or from an
//! external command speaking the line protocol in [`crate::external`]
//! (`s1<TAB>s2` in, one decimal raw score out).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::external::{run_line_protocol, ExternalError};

#[derive(Debug, Error)]
pub enum SemanticError {
    #[error("raw semantic score is not finite: {0}")]
    NonFiniteRaw(f64),
    #[error("external scorer needs a non-empty command")]
    EmptyCommand,
    #[error("unknown scorer {0:?} (expected `builtin` or `external:<command>`)")]
    UnknownScorer(String),
    #[error(transparent)]
    External(#[from] ExternalError),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum SemanticScorer {
    #[default]
    BuiltinTrigram,
    External { command: String },
}

impl SemanticScorer {
    pub fn external(command: impl Into<String>) -> Result<Self, SemanticError> {
        let command = command.into();
        if command.trim().is_empty() {
            return Err(SemanticError::EmptyCommand);
        }
        Ok(Self::External { command })
    }

    /// Raw scores for a batch of pairs, in input order. External scorers are run once
    /// per call.
    pub fn raw_scores(&self, pairs: &[(&str, &str)]) -> Result<Vec<f64>, SemanticError> {
        match self {
            Self::BuiltinTrigram => Ok(pairs.iter().map(|(a, b)| builtin_trigram_raw(a, b)).collect()),
            Self::External { command } => external_raw(command, pairs),
        }
    }

    pub fn raw(&self, s1: &str, s2: &str) -> Result<f64, SemanticError> {
        Ok(self.raw_scores(&[(s1, s2)])?[0])
    }

    /// Normalized semantic similarity on a 0–100 scale.
    pub fn similarity(&self, s1: &str, s2: &str) -> Result<f64, SemanticError> {
        semantic_similarity(self.raw(s1, s2)?)
    }
}

impl fmt::Display for SemanticScorer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BuiltinTrigram => f.write_str("builtin"),
            Self::External { command } => write!(f, "external:{command}"),
        }
    }
}

impl FromStr for SemanticScorer {
    type Err = SemanticError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            None if s == "builtin" => Ok(Self::BuiltinTrigram),
            Some(("external", command)) => Self::external(command),
            _ => Err(SemanticError::UnknownScorer(s.to_string())),
        }
    }
}

fn trigram_counts(s: &str) -> HashMap<[char; 3], u64> {
    let chars: Vec<char> = s.to_lowercase().chars().collect();
    let mut counts = HashMap::new();
    for w in chars.windows(3) {
        *counts.entry([w[0], w[1], w[2]]).or_insert(0) += 1;
    }
    counts
}

/// Cosine similarity of lowercased character-trigram count vectors, mapped to
/// `4 * (cosine - 0.5)`, so the raw score lies in `[-2, 2]`.
///
/// When neither sentence has a trigram (both shorter than three characters) the cosine
/// is 1 if the lowercased strings are equal and 0 otherwise.
pub fn builtin_trigram_raw(s1: &str, s2: &str) -> f64 {
    let (a, b) = (trigram_counts(s1), trigram_counts(s2));
    let cosine = if a.is_empty() && b.is_empty() {
        if s1.to_lowercase() == s2.to_lowercase() {
            1.0
        } else {
            0.0
        }
    } else {
        let dot: u64 = a.iter().map(|(k, &x)| x * b.get(k).copied().unwrap_or(0)).sum();
        let norm_a: u64 = a.values().map(|x| x * x).sum();
        let norm_b: u64 = b.values().map(|x| x * x).sum();
        if norm_a == 0 || norm_b == 0 {
            0.0
        } else {
            // sqrt of the exact integer product keeps identical inputs at exactly 1.
            dot as f64 / ((norm_a as u128 * norm_b as u128) as f64).sqrt()
        }
    };
    4.0 * (cosine - 0.5)
}

/// Runs an external scorer over `pairs` and parses one decimal raw score per line.
pub fn external_raw(command: &str, pairs: &[(&str, &str)]) -> Result<Vec<f64>, SemanticError> {
    let protocol = |line: usize, message: String| {
        SemanticError::External(ExternalError::ProtocolError { command: command.to_string(), line, message })
    };
    let mut lines = Vec::with_capacity(pairs.len());
    for (i, (a, b)) in pairs.iter().enumerate() {
        if [a, b].iter().any(|s| s.contains(['\t', '\n'])) {
            return Err(protocol(i + 1, "sentence contains a tab or newline".into()));
        }
        lines.push(format!("{a}\t{b}"));
    }
    run_line_protocol(command, &lines)?
        .iter()
        .enumerate()
        .map(|(i, line)| match line.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(protocol(i + 1, format!("not a finite decimal score: {line:?}"))),
        })
        .collect()
}

/// `100 · σ(raw)` with the logistic sigmoid σ.
pub fn semantic_similarity(raw: f64) -> Result<f64, SemanticError> {
    if !raw.is_finite() {
        return Err(SemanticError::NonFiniteRaw(raw));
    }
    Ok(100.0 / (1.0 + (-raw).exp()))
}
