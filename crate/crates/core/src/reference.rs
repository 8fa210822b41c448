//! Reference quality predictor: estimates the typical quality of a sentence's paraphrases
//! from surface features with closed-form ridge regression (one output per quality dimension).

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quality::QualityVector;

pub const MODEL_FORMAT: &str = "qcpg-reference-model/1";
pub const DEFAULT_LAMBDA: f64 = 1.0;

pub const FEATURE_NAMES: [&str; 8] = [
    "token_count",
    "char_count",
    "mean_token_length",
    "digit_count",
    "capitalized_token_count",
    "punctuation_count",
    "type_token_ratio",
    "is_question",
];

#[derive(Debug, Error)]
pub enum ReferenceError {
    #[error("degenerate design: {0}")]
    DegenerateDesign(String),
    #[error("regularization strength must be positive and finite, got {0}")]
    InvalidLambda(f64),
    #[error("cannot evaluate on an empty sample set")]
    EmptyEvalSet,
    #[error("unsupported model format {found:?} (expected {MODEL_FORMAT:?})")]
    UnsupportedFormat { found: String },
    #[error("malformed model file: {0}")]
    MalformedModel(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Surface features of a sentence, in [`FEATURE_NAMES`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector(pub [f64; 8]);

pub fn featurize(s: &str) -> FeatureVector {
    let tokens: Vec<&str> = s.split_whitespace().collect();
    let n_tokens = tokens.len() as f64;
    let token_chars: usize = tokens.iter().map(|t| t.chars().count()).sum();
    let mean_len = if tokens.is_empty() { 0.0 } else { token_chars as f64 / n_tokens };
    let digits = s.chars().filter(char::is_ascii_digit).count();
    let capitalized = tokens.iter().filter(|t| t.chars().next().is_some_and(char::is_uppercase)).count();
    let punctuation = s.chars().filter(char::is_ascii_punctuation).count();
    let ttr = if tokens.is_empty() {
        1.0
    } else {
        let types: HashSet<String> = tokens.iter().map(|t| t.to_lowercase()).collect();
        types.len() as f64 / n_tokens
    };
    FeatureVector([
        n_tokens,
        s.chars().count() as f64,
        mean_len,
        digits as f64,
        capitalized as f64,
        punctuation as f64,
        ttr,
        if s.contains('?') { 1.0 } else { 0.0 },
    ])
}

/// Ridge model over z-scored features. `weights[d]` belongs to quality dimension `d`
/// (sem, syn, lex); the bias is not regularized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceModel {
    format: String,
    feature_names: Vec<String>,
    means: Vec<f64>,
    scales: Vec<f64>,
    weights: Vec<Vec<f64>>,
    bias: [f64; 3],
    lambda: f64,
}

fn check_lambda(lambda: f64) -> Result<(), ReferenceError> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(())
    } else {
        Err(ReferenceError::InvalidLambda(lambda))
    }
}

/// Fits one ridge regression per quality dimension to `(sentence, q(sentence, paraphrase))` samples.
pub fn fit<S: AsRef<str>>(samples: &[(S, QualityVector)], lambda: f64) -> Result<ReferenceModel, ReferenceError> {
    check_lambda(lambda)?;
    if samples.len() < 2 {
        return Err(ReferenceError::DegenerateDesign(format!(
            "need at least 2 samples, got {}",
            samples.len()
        )));
    }
    let features: Vec<[f64; 8]> = samples.iter().map(|(s, _)| featurize(s.as_ref()).0).collect();
    let targets: Vec<[f64; 3]> = samples.iter().map(|(_, q)| q.to_array()).collect();
    if targets.iter().flatten().any(|v| !v.is_finite()) {
        return Err(ReferenceError::DegenerateDesign("non-finite target".into()));
    }

    let n = samples.len();
    let p = FEATURE_NAMES.len();
    let means: Vec<f64> = (0..p).map(|j| features.iter().map(|f| f[j]).sum::<f64>() / n as f64).collect();
    let scales: Vec<f64> = (0..p)
        .map(|j| {
            let var = features.iter().map(|f| (f[j] - means[j]).powi(2)).sum::<f64>() / n as f64;
            // Constant columns standardize to zero; any scale works.
            if var > 0.0 {
                var.sqrt()
            } else {
                1.0
            }
        })
        .collect();
    let design = DMatrix::from_fn(n, p, |i, j| (features[i][j] - means[j]) / scales[j]);

    let mut gram = design.transpose() * &design;
    for j in 0..p {
        gram[(j, j)] += lambda;
    }
    let chol = gram
        .cholesky()
        .ok_or_else(|| ReferenceError::DegenerateDesign("normal equations are not positive definite".into()))?;

    let mut weights = Vec::with_capacity(3);
    let mut bias = [0.0; 3];
    for d in 0..3 {
        let mean_y = targets.iter().map(|t| t[d]).sum::<f64>() / n as f64;
        let centered = DVector::from_iterator(n, targets.iter().map(|t| t[d] - mean_y));
        let w = chol.solve(&(design.transpose() * centered));
        if w.iter().any(|v| !v.is_finite()) {
            return Err(ReferenceError::DegenerateDesign("solution is not finite".into()));
        }
        weights.push(w.iter().copied().collect());
        bias[d] = mean_y;
    }

    Ok(ReferenceModel {
        format: MODEL_FORMAT.to_string(),
        feature_names: FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
        means,
        scales,
        weights,
        bias,
        lambda,
    })
}

impl ReferenceModel {
    /// A model that ignores its input and always predicts `q`.
    pub fn constant(q: QualityVector) -> Self {
        let p = FEATURE_NAMES.len();
        Self {
            format: MODEL_FORMAT.to_string(),
            feature_names: FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
            means: vec![0.0; p],
            scales: vec![1.0; p],
            weights: vec![vec![0.0; p]; 3],
            bias: q.to_array(),
            lambda: DEFAULT_LAMBDA,
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Unclamped linear output.
    pub fn predict_linear(&self, s: &str) -> [f64; 3] {
        let f = featurize(s).0;
        let mut out = self.bias;
        for (d, row) in self.weights.iter().enumerate() {
            for j in 0..f.len() {
                out[d] += row[j] * (f[j] - self.means[j]) / self.scales[j];
            }
        }
        out
    }

    /// Reference quality `r(s)`, clamped into [0, 100].
    pub fn predict(&self, s: &str) -> QualityVector {
        QualityVector::from_array(self.predict_linear(s)).clamped()
    }

    /// Weights and intercepts expressed on the raw (unstandardized) features.
    pub fn raw_coefficients(&self) -> ([Vec<f64>; 3], [f64; 3]) {
        let mut weights: [Vec<f64>; 3] = Default::default();
        let mut intercepts = self.bias;
        for d in 0..3 {
            weights[d] = self.weights[d].iter().zip(&self.scales).map(|(w, s)| w / s).collect();
            intercepts[d] -= weights[d].iter().zip(&self.means).map(|(w, m)| w * m).sum::<f64>();
        }
        (weights, intercepts)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ReferenceError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| ReferenceError::MalformedModel(e.to_string()))?;
        match value.get("format").and_then(|f| f.as_str()) {
            Some(MODEL_FORMAT) => {}
            Some(other) => return Err(ReferenceError::UnsupportedFormat { found: other.to_string() }),
            None => return Err(ReferenceError::UnsupportedFormat { found: String::new() }),
        }
        let model: ReferenceModel =
            serde_json::from_value(value).map_err(|e| ReferenceError::MalformedModel(e.to_string()))?;
        model.check()?;
        Ok(model)
    }

    fn check(&self) -> Result<(), ReferenceError> {
        let p = FEATURE_NAMES.len();
        let bad = |m: &str| Err(ReferenceError::MalformedModel(m.to_string()));
        if self.feature_names.iter().map(String::as_str).ne(FEATURE_NAMES) {
            return bad("feature names do not match this build");
        }
        if self.means.len() != p || self.scales.len() != p {
            return bad("standardization statistics have the wrong length");
        }
        if self.weights.len() != 3 || self.weights.iter().any(|r| r.len() != p) {
            return bad("weight matrix must be 3 x feature count");
        }
        if self.scales.iter().any(|&s| !(s.is_finite() && s > 0.0)) {
            return bad("scales must be positive");
        }
        let values = self.means.iter().chain(self.weights.iter().flatten()).chain(&self.bias);
        if values.into_iter().any(|v| !v.is_finite()) {
            return bad("non-finite coefficient");
        }
        check_lambda(self.lambda)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ReferenceError> {
        let path = path.as_ref();
        fs::write(path, self.to_json() + "\n")
            .map_err(|source| ReferenceError::Io { path: path.display().to_string(), source })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ReferenceError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|source| ReferenceError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }
}

/// Per-dimension mean squared error of `model` on held-out samples.
pub fn evaluate_mse<S: AsRef<str>>(model: &ReferenceModel, samples: &[(S, QualityVector)]) -> Result<[f64; 3], ReferenceError> {
    if samples.is_empty() {
        return Err(ReferenceError::EmptyEvalSet);
    }
    let mut sums = [0.0; 3];
    for (s, q) in samples {
        let r = model.predict(s.as_ref()).to_array();
        for d in 0..3 {
            sums[d] += (r[d] - q.to_array()[d]).powi(2);
        }
    }
    Ok(sums.map(|v| v / samples.len() as f64))
}

/// MSE of always predicting the per-dimension mean of `fit_on`, measured on `eval_on`.
pub fn mean_predictor_mse<S: AsRef<str>, T: AsRef<str>>(
    fit_on: &[(S, QualityVector)],
    eval_on: &[(T, QualityVector)],
) -> Result<[f64; 3], ReferenceError> {
    if fit_on.is_empty() || eval_on.is_empty() {
        return Err(ReferenceError::EmptyEvalSet);
    }
    let mut mean = [0.0; 3];
    for (_, q) in fit_on {
        for (m, v) in mean.iter_mut().zip(q.to_array()) {
            *m += v / fit_on.len() as f64;
        }
    }
    evaluate_mse(&ReferenceModel::constant(QualityVector::from_array(mean)), eval_on)
}
