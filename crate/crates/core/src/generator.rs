//! Controlled generators: given a sentence and a control vector, produce a paraphrase.
//!
//! The built-in generators need no model. The retrieval oracle answers with the member of
//! the sentence's cluster whose quality is closest to the control; the noisy oracle does the
//! same after perturbing every candidate's quality with seeded Gaussian noise. External
//! generators receive `<sem_K> <syn_K> <lex_K> sentence` lines and answer one paraphrase
//! per line.

use std::fmt;
use std::str::FromStr;

use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::dataset::Cluster;
use crate::external::{run_line_protocol, ExternalError};
use crate::quality::{prepend_control, quality_batch, AnalyzedSentence, ControlVector, QualityError, QualityVector};
use crate::seed::{self, Subsystem};
use crate::semantic::SemanticScorer;
use crate::tree_metrics::{parse_bracketed, TreeParseError};

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("oracle generator has no candidate paraphrases in its context")]
    EmptyContext,
    #[error("oracle generator needs the sentence's cluster as context")]
    MissingContext,
    #[error("generator produced an empty paraphrase")]
    EmptyOutput,
    #[error("cluster {cluster_id}, slot {slot}: {source}")]
    BadTree {
        cluster_id: String,
        slot: usize,
        #[source]
        source: TreeParseError,
    },
    #[error("noise_std must be finite and non-negative, got {0}")]
    InvalidNoise(f64),
    #[error("external generator needs a non-empty command")]
    EmptyCommand,
    #[error("unknown generator {0:?} (expected identity, retrieval, noisy:<std> or external:<command>)")]
    UnknownGenerator(String),
    #[error(transparent)]
    Quality(#[from] QualityError),
    #[error(transparent)]
    External(#[from] ExternalError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Identity,
    RetrievalOracle,
    NoisyOracle { noise_std: f64 },
    External { command: String },
}

impl GeneratorSpec {
    pub fn noisy(noise_std: f64) -> Result<Self, GeneratorError> {
        if !(noise_std.is_finite() && noise_std >= 0.0) {
            return Err(GeneratorError::InvalidNoise(noise_std));
        }
        Ok(Self::NoisyOracle { noise_std })
    }

    pub fn external(command: impl Into<String>) -> Result<Self, GeneratorError> {
        let command = command.into();
        if command.trim().is_empty() {
            return Err(GeneratorError::EmptyCommand);
        }
        Ok(Self::External { command })
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Identity => f.write_str("identity"),
            Self::RetrievalOracle => f.write_str("retrieval"),
            Self::NoisyOracle { noise_std } => write!(f, "noisy:{noise_std}"),
            Self::External { command } => write!(f, "external:{command}"),
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            None if s == "identity" => Ok(Self::Identity),
            None if s == "retrieval" || s == "retrieval_oracle" => Ok(Self::RetrievalOracle),
            Some(("noisy" | "noisy_oracle", std)) => {
                Self::noisy(std.trim().parse().map_err(|_| GeneratorError::UnknownGenerator(s.to_string()))?)
            }
            Some(("external", command)) => Self::external(command),
            _ => Err(GeneratorError::UnknownGenerator(s.to_string())),
        }
    }
}

/// A cluster with its parse trees read and every member analyzed for quality scoring.
/// Members whose tree is missing cannot be scored and are never offered as candidates.
#[derive(Debug, Clone)]
pub struct ClusterContext {
    cluster_id: String,
    sentences: Vec<String>,
    analyzed: Vec<Option<AnalyzedSentence>>,
}

impl ClusterContext {
    pub fn from_cluster(cluster: &Cluster) -> Result<Self, GeneratorError> {
        let mut analyzed = Vec::with_capacity(cluster.sentences.len());
        for (slot, sentence) in cluster.sentences.iter().enumerate() {
            let member = match cluster.tree(slot) {
                None => None,
                Some(text) => {
                    let tree = parse_bracketed(text).map_err(|source| GeneratorError::BadTree {
                        cluster_id: cluster.cluster_id.clone(),
                        slot,
                        source,
                    })?;
                    Some(AnalyzedSentence::new(sentence.clone(), &tree))
                }
            };
            analyzed.push(member);
        }
        Ok(Self { cluster_id: cluster.cluster_id.clone(), sentences: cluster.sentences.clone(), analyzed })
    }

    pub fn cluster_id(&self) -> &str {
        &self.cluster_id
    }

    pub fn sentences(&self) -> &[String] {
        &self.sentences
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn member(&self, slot: usize) -> Option<&AnalyzedSentence> {
        self.analyzed.get(slot)?.as_ref()
    }

    pub fn slot_of(&self, sentence: &str) -> Option<usize> {
        self.sentences.iter().position(|s| s == sentence)
    }

    /// An analyzed member whose text equals `text`, if any.
    pub fn find_analyzed(&self, text: &str) -> Option<&AnalyzedSentence> {
        self.sentences
            .iter()
            .zip(&self.analyzed)
            .find_map(|(s, a)| a.as_ref().filter(|_| s == text))
    }

    /// `q(source, member)` for every scorable member other than `source_slot`, in slot order.
    pub fn candidate_qualities(
        &self,
        source: &AnalyzedSentence,
        source_slot: Option<usize>,
        scorer: &SemanticScorer,
    ) -> Result<Vec<Candidate>, QualityError> {
        let members: Vec<(usize, &AnalyzedSentence)> = self
            .analyzed
            .iter()
            .enumerate()
            .filter(|&(slot, _)| Some(slot) != source_slot)
            .filter_map(|(slot, a)| a.as_ref().map(|a| (slot, a)))
            .collect();
        let pairs: Vec<_> = members.iter().map(|&(_, m)| (source, m)).collect();
        let qualities = quality_batch(scorer, &pairs)?;
        Ok(members.iter().zip(qualities).map(|(&(slot, _), quality)| Candidate { slot, quality }).collect())
    }
}

/// A cluster member an oracle may answer with, and its quality relative to the source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub slot: usize,
    pub quality: QualityVector,
}

/// A generator instance: its spec plus the seed that drives any randomness.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    spec: GeneratorSpec,
    seed: u64,
}

impl Generator {
    pub fn new(spec: GeneratorSpec, seed: u64) -> Self {
        Self { spec, seed }
    }

    pub fn spec(&self) -> &GeneratorSpec {
        &self.spec
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Index into `candidates` an oracle answers with for control `c`: the smallest
    /// Euclidean distance between (possibly perturbed) quality and control, earliest
    /// candidate on ties. `None` for non-oracle generators or an empty candidate list.
    pub fn choose(&self, source: &str, c: ControlVector, candidates: &[Candidate]) -> Option<usize> {
        let noise = match self.spec {
            GeneratorSpec::RetrievalOracle => None,
            GeneratorSpec::NoisyOracle { noise_std } => Some(noise_std),
            _ => return None,
        };
        let perturbed: Vec<QualityVector> = match noise {
            None => candidates.iter().map(|k| k.quality).collect(),
            Some(std) => {
                let mut key = source.as_bytes().to_vec();
                key.extend_from_slice(&<[u8; 3]>::from(c));
                let mut rng = seed::stream(self.seed, Subsystem::NoisyGenerator, &key);
                let normal = Normal::new(0.0, std).expect("noise std validated at construction");
                candidates
                    .iter()
                    .map(|k| {
                        let q = k.quality.to_array();
                        QualityVector::from_array([
                            q[0] + normal.sample(&mut rng),
                            q[1] + normal.sample(&mut rng),
                            q[2] + normal.sample(&mut rng),
                        ])
                    })
                    .collect()
            }
        };
        let mut best: Option<(usize, f64)> = None;
        for (i, q) in perturbed.iter().enumerate() {
            let d = q.distance_to(&c);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        best.map(|(i, _)| i)
    }

    /// Generates one paraphrase of `s` for control `c`.
    ///
    /// Oracle generators look `s` up in `context` (the cluster containing it) and skip its
    /// own slot; if `s` is not a member, every scorable member is a candidate.
    pub fn generate(
        &self,
        s: &str,
        c: ControlVector,
        context: Option<&ClusterContext>,
        scorer: &SemanticScorer,
    ) -> Result<String, GeneratorError> {
        match &self.spec {
            GeneratorSpec::Identity => Ok(s.to_string()),
            GeneratorSpec::External { command } => {
                let out = external_generate(command, &[(s, c)])?.pop().expect("one line per input");
                if out.is_empty() && !s.is_empty() {
                    return Err(GeneratorError::EmptyOutput);
                }
                Ok(out)
            }
            GeneratorSpec::RetrievalOracle | GeneratorSpec::NoisyOracle { .. } => {
                let context = context.ok_or(GeneratorError::MissingContext)?;
                let slot = context.slot_of(s);
                let source = match slot.and_then(|i| context.member(i)) {
                    Some(a) => a.clone(),
                    // Without a parse for s only surface features are known; the
                    // syntactic component then compares against a bare root.
                    None => AnalyzedSentence::new(s, &parse_bracketed("(ROOT)").expect("valid literal")),
                };
                let candidates = context.candidate_qualities(&source, slot, scorer)?;
                let pick = self.choose(s, c, &candidates).ok_or(GeneratorError::EmptyContext)?;
                Ok(context.sentences[candidates[pick].slot].clone())
            }
        }
    }
}

/// Sends `<control tokens> <sentence>` lines to `command`; returns one paraphrase per input.
pub fn external_generate(command: &str, batch: &[(&str, ControlVector)]) -> Result<Vec<String>, GeneratorError> {
    let lines: Vec<String> = batch.iter().map(|(s, c)| prepend_control(s, c)).collect();
    Ok(run_line_protocol(command, &lines)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quality::{decode_control, quality_vector};

    fn context() -> ClusterContext {
        ClusterContext::from_cluster(&Cluster {
            cluster_id: "c".into(),
            sentences: vec!["the dog barked".into(), "the dog barked loudly".into(), "a hound howled".into()],
            trees: Some(vec![
                "(S (NP (DT the) (NN dog)) (VP (VBD barked)))".into(),
                "(S (NP (DT the) (NN dog)) (VP (VBD barked) (ADVP (RB loudly))))".into(),
                "(S (NP (DT a) (NN hound)) (VP (VBD howled)))".into(),
            ]),
        })
        .unwrap()
    }

    fn cv(a: u8, b: u8, c: u8) -> ControlVector {
        ControlVector::new(a, b, c).unwrap()
    }

    #[test]
    fn identity_returns_input() {
        let g = Generator::new(GeneratorSpec::Identity, 1);
        let out = g.generate("anything", cv(90, 50, 50), None, &SemanticScorer::BuiltinTrigram).unwrap();
        assert_eq!(out, "anything");
    }

    #[test]
    fn oracle_hits_exact_quality() {
        let ctx = context();
        let scorer = SemanticScorer::BuiltinTrigram;
        let src = "the dog barked";
        let g = Generator::new(GeneratorSpec::RetrievalOracle, 1);
        for target_slot in [1, 2] {
            let q = ctx
                .candidate_qualities(ctx.member(0).unwrap(), Some(0), &scorer)
                .unwrap()
                .into_iter()
                .find(|k| k.slot == target_slot)
                .unwrap()
                .quality;
            // Steer with the quantized quality of the target itself.
            let c = crate::quality::apply_offset(&q, &crate::quality::Offset::ZERO).unwrap();
            let out = g.generate(src, c, Some(&ctx), &scorer).unwrap();
            assert_eq!(out, ctx.sentences()[target_slot]);
        }
    }

    #[test]
    fn oracle_candidate_quality_matches_direct_computation() {
        let ctx = context();
        let scorer = SemanticScorer::BuiltinTrigram;
        let cands = ctx.candidate_qualities(ctx.member(0).unwrap(), Some(0), &scorer).unwrap();
        assert_eq!(cands.iter().map(|k| k.slot).collect::<Vec<_>>(), [1, 2]);
        let tree = |s: &str| parse_bracketed(s).unwrap();
        let direct = quality_vector(
            "the dog barked",
            "a hound howled",
            &tree("(S (NP (DT the) (NN dog)) (VP (VBD barked)))"),
            &tree("(S (NP (DT a) (NN hound)) (VP (VBD howled)))"),
            &scorer,
        )
        .unwrap();
        assert_eq!(cands[1].quality, direct);
    }

    #[test]
    fn oracle_errors() {
        let scorer = SemanticScorer::BuiltinTrigram;
        let g = Generator::new(GeneratorSpec::RetrievalOracle, 1);
        assert!(matches!(g.generate("x", cv(0, 0, 0), None, &scorer), Err(GeneratorError::MissingContext)));
        let single = ClusterContext::from_cluster(&Cluster {
            cluster_id: "s".into(),
            sentences: vec!["alone".into()],
            trees: Some(vec!["(S (NN alone))".into()]),
        })
        .unwrap();
        assert!(matches!(g.generate("alone", cv(0, 0, 0), Some(&single), &scorer), Err(GeneratorError::EmptyContext)));
        let bad = Cluster { cluster_id: "b".into(), sentences: vec!["x".into()], trees: Some(vec!["(S".into()]) };
        assert!(matches!(ClusterContext::from_cluster(&bad), Err(GeneratorError::BadTree { slot: 0, .. })));
    }

    #[test]
    fn ties_go_to_the_lowest_slot() {
        let q = QualityVector::new(50.0, 10.0, 10.0).unwrap();
        let cands = [Candidate { slot: 3, quality: q }, Candidate { slot: 5, quality: q }];
        let g = Generator::new(GeneratorSpec::RetrievalOracle, 0);
        assert_eq!(g.choose("s", cv(50, 10, 10), &cands), Some(0));
        assert_eq!(Generator::new(GeneratorSpec::Identity, 0).choose("s", cv(0, 0, 0), &cands), None);
    }

    #[test]
    fn noisy_oracle_is_seeded() {
        let ctx = context();
        let scorer = SemanticScorer::BuiltinTrigram;
        let run = |seed| {
            let g = Generator::new(GeneratorSpec::noisy(30.0).unwrap(), seed);
            ControlVector::all()
                .step_by(97)
                .map(|c| g.generate("the dog barked", c, Some(&ctx), &scorer).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(run(5), run(5));
        // Zero noise degenerates to the exact oracle.
        let exact = Generator::new(GeneratorSpec::RetrievalOracle, 0);
        let zero = Generator::new(GeneratorSpec::noisy(0.0).unwrap(), 9);
        for c in ControlVector::all().step_by(131) {
            assert_eq!(
                exact.generate("the dog barked", c, Some(&ctx), &scorer).unwrap(),
                zero.generate("the dog barked", c, Some(&ctx), &scorer).unwrap()
            );
        }
    }

    #[test]
    fn spec_strings() {
        assert_eq!("identity".parse::<GeneratorSpec>().unwrap(), GeneratorSpec::Identity);
        assert_eq!("retrieval".parse::<GeneratorSpec>().unwrap(), GeneratorSpec::RetrievalOracle);
        assert_eq!("noisy:2.5".parse::<GeneratorSpec>().unwrap(), GeneratorSpec::NoisyOracle { noise_std: 2.5 });
        assert!("noisy:-1".parse::<GeneratorSpec>().is_err());
        assert!("external:".parse::<GeneratorSpec>().is_err());
        let ext: GeneratorSpec = "external:cat".parse().unwrap();
        assert_eq!(ext.to_string(), "external:cat");
    }

    #[test]
    fn external_echo_stub() {
        let scorer = SemanticScorer::BuiltinTrigram;
        // Strip the three control tokens and echo the sentence.
        let g = Generator::new(GeneratorSpec::external("cut -d' ' -f4-").unwrap(), 0);
        assert_eq!(g.generate("a cat sat", cv(10, 20, 30), None, &scorer).unwrap(), "a cat sat");
        // `cat` echoes the whole prefixed line, which must decode back.
        let out = external_generate("cat", &[("hi there", cv(95, 0, 20))]).unwrap();
        assert_eq!(decode_control(&out[0]).unwrap(), (cv(95, 0, 20), "hi there"));
        assert!(matches!(
            external_generate("head -n 1", &[("a", cv(0, 0, 0)), ("b", cv(0, 0, 0))]),
            Err(GeneratorError::External(ExternalError::ProtocolError { .. }))
        ));
    }
}
