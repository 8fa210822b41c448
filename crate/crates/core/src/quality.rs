//! Quality vectors, the 20-level control quantization and the control-token surface syntax.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexical::{bag_distance, tokenize, WordBag};
use crate::semantic::{semantic_similarity, SemanticError, SemanticScorer};
use crate::tree_metrics::{syntactic_distance_prepared, syntax_skeleton, ParseTree, PreparedTree, TedScratch};

/// Width of one quantization bin.
pub const QUANT_STEP: u8 = 5;
/// Number of admissible values per control dimension: 0, 5, …, 95.
pub const QUANT_LEVELS: u8 = 20;

#[derive(Debug, Error)]
pub enum QualityError {
    #[error("value is not finite: {0}")]
    NonFinite(f64),
    #[error("{0} is not a quantized control value (expected a multiple of 5 in 0..=95)")]
    InvalidControlValue(u8),
    #[error("malformed control prefix: {0:?}")]
    MalformedControlPrefix(String),
    #[error("quality component {name} = {value} outside [0, 100]")]
    OutOfRange { name: &'static str, value: f64 },
    #[error(transparent)]
    Semantic(#[from] SemanticError),
}

/// Paraphrase quality `(semantic similarity, syntactic distance, lexical distance)`, each on 0–100.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct QualityVector {
    pub sem: f64,
    pub syn: f64,
    pub lex: f64,
}

impl QualityVector {
    pub fn new(sem: f64, syn: f64, lex: f64) -> Result<Self, QualityError> {
        for (name, value) in [("sem", sem), ("syn", syn), ("lex", lex)] {
            if !value.is_finite() {
                return Err(QualityError::NonFinite(value));
            }
            if !(0.0..=100.0).contains(&value) {
                return Err(QualityError::OutOfRange { name, value });
            }
        }
        Ok(Self { sem, syn, lex })
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.sem, self.syn, self.lex]
    }

    pub fn from_array([sem, syn, lex]: [f64; 3]) -> Self {
        Self { sem, syn, lex }
    }

    /// Each component clamped into [0, 100].
    pub fn clamped(self) -> Self {
        Self::from_array(self.to_array().map(|v| v.clamp(0.0, 100.0)))
    }

    /// Average of the syntactic and lexical components.
    pub fn diversity(&self) -> f64 {
        (self.syn + self.lex) / 2.0
    }

    pub fn distance_to(&self, c: &ControlVector) -> f64 {
        let d = [
            self.sem - f64::from(c.sem),
            self.syn - f64::from(c.syn),
            self.lex - f64::from(c.lex),
        ];
        d.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Sentence-independent displacement added to a reference quality before quantization.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Offset {
    pub sem: f64,
    pub syn: f64,
    pub lex: f64,
}

impl Offset {
    pub const ZERO: Offset = Offset { sem: 0.0, syn: 0.0, lex: 0.0 };

    pub fn new(sem: f64, syn: f64, lex: f64) -> Self {
        Self { sem, syn, lex }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.sem, self.syn, self.lex]
    }

    pub fn l1(&self) -> f64 {
        self.sem.abs() + self.syn.abs() + self.lex.abs()
    }

    pub fn is_zero(&self) -> bool {
        self.to_array().iter().all(|&v| v == 0.0)
    }

    /// Lexicographic order over (sem, syn, lex).
    pub fn lex_cmp(&self, other: &Offset) -> std::cmp::Ordering {
        self.sem
            .total_cmp(&other.sem)
            .then(self.syn.total_cmp(&other.syn))
            .then(self.lex.total_cmp(&other.lex))
    }
}

/// Quantized control input: every component is one of 0, 5, …, 95.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[u8; 3]", into = "[u8; 3]")]
pub struct ControlVector {
    sem: u8,
    syn: u8,
    lex: u8,
}

impl ControlVector {
    pub fn new(sem: u8, syn: u8, lex: u8) -> Result<Self, QualityError> {
        for v in [sem, syn, lex] {
            if v % QUANT_STEP != 0 || v >= QUANT_STEP * QUANT_LEVELS {
                return Err(QualityError::InvalidControlValue(v));
            }
        }
        Ok(Self { sem, syn, lex })
    }

    pub fn sem(&self) -> u8 {
        self.sem
    }

    pub fn syn(&self) -> u8 {
        self.syn
    }

    pub fn lex(&self) -> u8 {
        self.lex
    }

    /// All 8000 admissible control vectors.
    pub fn all() -> impl Iterator<Item = ControlVector> {
        let levels = || (0..QUANT_LEVELS).map(|i| i * QUANT_STEP);
        levels().flat_map(move |sem| {
            levels().flat_map(move |syn| levels().map(move |lex| ControlVector { sem, syn, lex }))
        })
    }
}

impl TryFrom<[u8; 3]> for ControlVector {
    type Error = QualityError;

    fn try_from([sem, syn, lex]: [u8; 3]) -> Result<Self, Self::Error> {
        Self::new(sem, syn, lex)
    }
}

impl From<ControlVector> for [u8; 3] {
    fn from(c: ControlVector) -> Self {
        [c.sem, c.syn, c.lex]
    }
}

impl fmt::Display for ControlVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<sem_{}> <syn_{}> <lex_{}>", self.sem, self.syn, self.lex)
    }
}

/// Clamp to [0, 100] and floor into one of 20 bins of width 5; returns the bin's lower edge.
pub fn quantize(v: f64) -> Result<u8, QualityError> {
    if !v.is_finite() {
        return Err(QualityError::NonFinite(v));
    }
    let bin = (v.clamp(0.0, 100.0) / f64::from(QUANT_STEP)).floor() as u8;
    Ok(bin.min(QUANT_LEVELS - 1) * QUANT_STEP)
}

pub fn encode_control(c: &ControlVector) -> String {
    c.to_string()
}

pub fn prepend_control(sentence: &str, c: &ControlVector) -> String {
    format!("{c} {sentence}")
}

/// Splits `<sem_K> <syn_K> <lex_K> sentence` into the control vector and the sentence.
pub fn decode_control(text: &str) -> Result<(ControlVector, &str), QualityError> {
    let malformed = || QualityError::MalformedControlPrefix(text.chars().take(64).collect());
    let mut rest = text;
    let mut values = [0u8; 3];
    for (i, name) in ["sem", "syn", "lex"].into_iter().enumerate() {
        let body = rest
            .strip_prefix('<')
            .and_then(|r| r.strip_prefix(name))
            .and_then(|r| r.strip_prefix('_'))
            .ok_or_else(malformed)?;
        let close = body.find('>').ok_or_else(malformed)?;
        let digits = &body[..close];
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        values[i] = digits.parse().map_err(|_| malformed())?;
        rest = &body[close + 1..];
        if i < 2 {
            rest = rest.strip_prefix(' ').ok_or_else(malformed)?;
        }
    }
    let sentence = match rest {
        "" => "",
        r => r.strip_prefix(' ').ok_or_else(malformed)?,
    };
    let control = ControlVector::new(values[0], values[1], values[2]).map_err(|_| malformed())?;
    Ok((control, sentence))
}

/// Control input for a sentence with reference quality `reference`: `quantize(reference + offset)`.
pub fn apply_offset(reference: &QualityVector, offset: &Offset) -> Result<ControlVector, QualityError> {
    ControlVector::new(
        quantize(reference.sem + offset.sem)?,
        quantize(reference.syn + offset.syn)?,
        quantize(reference.lex + offset.lex)?,
    )
}

/// A sentence with the pieces every quality computation needs precomputed.
#[derive(Debug, Clone)]
pub struct AnalyzedSentence {
    text: String,
    bag: WordBag,
    skeleton: PreparedTree,
}

impl AnalyzedSentence {
    pub fn new(text: impl Into<String>, tree: &ParseTree) -> Self {
        let text = text.into();
        Self { bag: tokenize(&text), skeleton: PreparedTree::new(&syntax_skeleton(tree)), text }
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}

/// `q(s, t)` for one pair.
pub fn quality_vector(
    s: &str,
    t: &str,
    tree_s: &ParseTree,
    tree_t: &ParseTree,
    scorer: &SemanticScorer,
) -> Result<QualityVector, QualityError> {
    let (a, b) = (AnalyzedSentence::new(s, tree_s), AnalyzedSentence::new(t, tree_t));
    Ok(quality_batch(scorer, &[(&a, &b)])?[0])
}

/// `q(s, t)` for many pairs, in order. External scorers are invoked once for the whole batch.
pub fn quality_batch(
    scorer: &SemanticScorer,
    pairs: &[(&AnalyzedSentence, &AnalyzedSentence)],
) -> Result<Vec<QualityVector>, QualityError> {
    let texts: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.text(), b.text())).collect();
    let raws = scorer.raw_scores(&texts)?;
    let mut scratch = TedScratch::default();
    pairs
        .iter()
        .zip(raws)
        .map(|((a, b), raw)| {
            Ok(QualityVector {
                sem: semantic_similarity(raw)?,
                syn: syntactic_distance_prepared(&a.skeleton, &b.skeleton, &mut scratch),
                lex: bag_distance(&a.bag, &b.bag),
            })
        })
        .collect()
}
