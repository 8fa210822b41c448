//! Quality-controlled paraphrase toolkit.
//!
//! Measures paraphrase quality as a (semantic, syntactic, lexical) triple, encodes target
//! qualities as control tokens, predicts per-sentence reference qualities, and searches the
//! offset space for the operating point that maximizes diversity under a semantic floor.

pub mod assignment;
pub mod dataset;
pub mod evaluation;
pub mod external;
pub mod generator;
pub mod lexical;
pub mod quality;
pub mod reference;
pub mod seed;
pub mod selection;
pub mod semantic;
pub mod synthetic;
pub mod tree_metrics;

pub use dataset::{Cluster, DatasetSplit, PairMode, SentencePair, SplitSizes};
pub use evaluation::{EvalReport, SystemOutputs, SystemRow};
pub use generator::{ClusterContext, Generator, GeneratorSpec};
pub use quality::{AnalyzedSentence, ControlVector, Offset, QualityVector};
pub use reference::ReferenceModel;
pub use selection::{DevItem, GridResult, GridRow, OffsetGrid, OperationPoint, SemConstraint};
pub use semantic::SemanticScorer;
pub use tree_metrics::ParseTree;
