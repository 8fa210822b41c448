//! Control-value selection: expected quality per offset over a dev set, responsiveness,
//! the 3-D offset grid search, heatmap export and constrained operation-point selection.
//!
//! For a dev sentence `s` with reference `r(s)` and offset `o`, the generator is asked
//! for `QCPG(s, quantize(r(s) + o))` and the realized quality `q(s, output)` is averaged
//! over the dev set. Offsets are independent units of work and run in parallel; each
//! mean is accumulated sequentially in dev-set order so results are reproducible.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::Cluster;
use crate::generator::{Candidate, ClusterContext, Generator, GeneratorError, GeneratorSpec};
use crate::quality::{apply_offset, quality_batch, ControlVector, Offset, QualityError, QualityVector};
use crate::reference::ReferenceModel;
use crate::semantic::SemanticScorer;

pub const HEATMAP_HEADER: &str = "o_sem,o_syn,o_lex,q_sem,q_syn,q_lex,r_sem,r_syn,r_lex,diversity,n";
/// Required semantic advantage over the baseline when picking an operation point.
pub const DEFAULT_SEM_MARGIN: f64 = 5.0;

#[derive(Debug, Error)]
pub enum SelectionError {
    #[error("dev set is empty")]
    EmptyDevSet,
    #[error("every generation failed at offset {0:?}")]
    AllGenerationsFailed(Offset),
    #[error("the zero offset is missing from the grid results")]
    MissingZeroPoint,
    #[error("offset {0:?} is not part of the grid")]
    UnknownOffset(Offset),
    #[error("no offset reaches semantic similarity {required:.4}; best attainable is {max_sem:.4}")]
    NoFeasibleOffset { required: f64, max_sem: f64 },
    #[error("grid is empty")]
    EmptyGrid,
    #[error("invalid grid axis {0:?} (expected min:step:max with step > 0 and min <= max)")]
    InvalidAxis(String),
    #[error("heatmap line {line}: {message}")]
    MalformedHeatmap { line: usize, message: String },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Quality(#[from] QualityError),
}

/// One dev-set sentence: a slot in an analyzed cluster.
#[derive(Debug, Clone)]
pub struct DevItem {
    context: Arc<ClusterContext>,
    slot: usize,
}

impl DevItem {
    /// Fails if the slot is out of range or has no parse tree.
    pub fn new(context: Arc<ClusterContext>, slot: usize) -> Option<Self> {
        context.member(slot)?;
        Some(Self { context, slot })
    }

    pub fn sentence(&self) -> &str {
        &self.context.sentences()[self.slot]
    }

    pub fn context(&self) -> &ClusterContext {
        &self.context
    }

    pub fn slot(&self) -> usize {
        self.slot
    }
}

/// Every member with a parse tree becomes a dev item, in file order. Members without a
/// tree are skipped with a warning.
pub fn dev_items(clusters: &[Cluster]) -> Result<Vec<DevItem>, GeneratorError> {
    let mut items = Vec::new();
    for cluster in clusters {
        let context = Arc::new(ClusterContext::from_cluster(cluster)?);
        for slot in 0..context.len() {
            match DevItem::new(context.clone(), slot) {
                Some(item) => items.push(item),
                None => warn!("cluster {} slot {slot}: no parse tree, skipped", cluster.cluster_id),
            }
        }
    }
    Ok(items)
}

/// One axis of the offset grid: `min, min + step, …, <= max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub min: f64,
    pub step: f64,
    pub max: f64,
}

impl AxisRange {
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.min + i as f64 * self.step).collect()
    }
}

impl Default for AxisRange {
    fn default() -> Self {
        Self { min: 0.0, step: 5.0, max: 50.0 }
    }
}

impl FromStr for AxisRange {
    type Err = SelectionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SelectionError::InvalidAxis(s.to_string());
        let parts: Vec<f64> = s.split(':').map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
        let &[min, step, max] = parts.as_slice() else { return Err(bad()) };
        if ![min, step, max].iter().all(|v| v.is_finite()) || step <= 0.0 || min > max {
            return Err(bad());
        }
        Ok(Self { min, step, max })
    }
}

/// Cartesian product of three axes, in lexicographic (sem, syn, lex) order.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OffsetGrid {
    pub sem: AxisRange,
    pub syn: AxisRange,
    pub lex: AxisRange,
}

impl OffsetGrid {
    pub fn uniform(axis: AxisRange) -> Self {
        Self { sem: axis, syn: axis, lex: axis }
    }

    pub fn offsets(&self) -> Vec<Offset> {
        let (syn, lex) = (self.syn.values(), self.lex.values());
        let mut out = Vec::new();
        for s in self.sem.values() {
            for &y in &syn {
                for &l in &lex {
                    out.push(Offset::new(s, y, l));
                }
            }
        }
        out
    }
}

/// Quality estimates at one offset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub offset: Offset,
    /// Mean realized quality over the dev set.
    pub q_tilde: QualityVector,
    /// `q_tilde` minus `q_tilde` at the zero offset.
    pub responsiveness: [f64; 3],
    /// Number of successful generations averaged into `q_tilde`.
    pub n: usize,
}

impl GridRow {
    pub fn diversity(&self) -> f64 {
        self.q_tilde.diversity()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub rows: Vec<GridRow>,
    /// Population standard deviation of ground-truth pair qualities in the dev set, per dimension.
    pub dim_std: [f64; 3],
    /// Offsets at which every generation failed.
    pub dropped: Vec<Offset>,
}

impl GridResult {
    pub fn row(&self, offset: &Offset) -> Option<&GridRow> {
        self.rows.iter().find(|r| r.offset == *offset)
    }

    /// `Q̃(o) − Q̃(0, 0, 0)`.
    pub fn responsiveness(&self, offset: &Offset) -> Result<[f64; 3], SelectionError> {
        let zero = self.row(&Offset::ZERO).ok_or(SelectionError::MissingZeroPoint)?;
        let row = self.row(offset).ok_or(SelectionError::UnknownOffset(*offset))?;
        let (a, b) = (row.q_tilde.to_array(), zero.q_tilde.to_array());
        Ok([a[0] - b[0], a[1] - b[1], a[2] - b[2]])
    }

    /// Responsiveness in units of the dev-set standard deviation; `None` where that is zero.
    pub fn responsiveness_in_std(&self, offset: &Offset) -> Result<[Option<f64>; 3], SelectionError> {
        let r = self.responsiveness(offset)?;
        Ok([0, 1, 2].map(|d| (self.dim_std[d] > 0.0).then(|| r[d] / self.dim_std[d])))
    }
}

struct PreparedItem {
    control_base: QualityVector,
    candidates: Vec<Candidate>,
    self_quality: QualityVector,
}

/// A dev set made ready for repeated evaluation: references predicted and every
/// ground-truth pair quality computed once.
pub struct GridContext<'a> {
    generator: &'a Generator,
    scorer: &'a SemanticScorer,
    dev: &'a [DevItem],
    items: Vec<PreparedItem>,
    dim_std: [f64; 3],
}

impl<'a> GridContext<'a> {
    pub fn prepare(
        generator: &'a Generator,
        model: &ReferenceModel,
        dev: &'a [DevItem],
        scorer: &'a SemanticScorer,
    ) -> Result<Self, SelectionError> {
        if dev.is_empty() {
            return Err(SelectionError::EmptyDevSet);
        }
        // One scorer batch over every (source, member) pair and every (source, source) pair.
        let mut pairs = Vec::new();
        let mut spans = Vec::with_capacity(dev.len());
        for item in dev {
            let source = item.context.member(item.slot).expect("dev items always have a parse");
            let start = pairs.len();
            pairs.push((source, source));
            for slot in (0..item.context.len()).filter(|&s| s != item.slot) {
                if let Some(m) = item.context.member(slot) {
                    pairs.push((source, m));
                }
            }
            spans.push(start..pairs.len());
        }
        let qualities = quality_batch(scorer, &pairs)?;

        let mut items = Vec::with_capacity(dev.len());
        for (item, span) in dev.iter().zip(spans) {
            let slots = (0..item.context.len()).filter(|&s| s != item.slot && item.context.member(s).is_some());
            let candidates =
                slots.zip(&qualities[span.start + 1..span.end]).map(|(slot, &quality)| Candidate { slot, quality }).collect();
            items.push(PreparedItem {
                control_base: model.predict(item.sentence()),
                candidates,
                self_quality: qualities[span.start],
            });
        }
        let dim_std = population_std(items.iter().flat_map(|i| i.candidates.iter().map(|k| k.quality)));
        Ok(Self { generator, scorer, dev, items, dim_std })
    }

    pub fn dim_std(&self) -> [f64; 3] {
        self.dim_std
    }

    /// Dev-set estimate of expected quality at `offset` and the number of successful
    /// generations behind it.
    pub fn expected_quality(&self, offset: &Offset) -> Result<(QualityVector, usize), SelectionError> {
        let controls: Vec<ControlVector> =
            self.items.iter().map(|i| apply_offset(&i.control_base, offset)).collect::<Result<_, _>>()?;
        let realized: Vec<Option<QualityVector>> = match self.generator.spec() {
            GeneratorSpec::Identity => self.items.iter().map(|i| Some(i.self_quality)).collect(),
            GeneratorSpec::RetrievalOracle | GeneratorSpec::NoisyOracle { .. } => self
                .items
                .iter()
                .zip(self.dev)
                .zip(&controls)
                .map(|((item, dev), &c)| {
                    self.generator.choose(dev.sentence(), c, &item.candidates).map(|k| item.candidates[k].quality)
                })
                .collect(),
            GeneratorSpec::External { command } => self.external_qualities(command, &controls)?,
        };

        let mut sums = [0.0; 3];
        let mut n = 0usize;
        for q in realized.iter().flatten() {
            for (s, v) in sums.iter_mut().zip(q.to_array()) {
                *s += v;
            }
            n += 1;
        }
        if n == 0 {
            return Err(SelectionError::AllGenerationsFailed(*offset));
        }
        Ok((QualityVector::from_array(sums.map(|s| s / n as f64)).clamped(), n))
    }

    fn external_qualities(&self, command: &str, controls: &[ControlVector]) -> Result<Vec<Option<QualityVector>>, SelectionError> {
        let batch: Vec<(&str, ControlVector)> = self.dev.iter().map(|d| d.sentence()).zip(controls.iter().copied()).collect();
        let outputs = crate::generator::external_generate(command, &batch)?;
        // Outputs can only be scored when their parse is known from the cluster.
        let mut pairs = Vec::new();
        let mut index = Vec::with_capacity(outputs.len());
        for (dev, out) in self.dev.iter().zip(&outputs) {
            let source = dev.context.member(dev.slot).expect("dev items always have a parse");
            match dev.context.find_analyzed(out).filter(|_| !out.is_empty()) {
                Some(target) => {
                    index.push(Some(pairs.len()));
                    pairs.push((source, target));
                }
                None => {
                    warn!("no parse for generated output {out:?}; excluded from the mean");
                    index.push(None);
                }
            }
        }
        let qualities = quality_batch(self.scorer, &pairs)?;
        Ok(index.into_iter().map(|i| i.map(|i| qualities[i])).collect())
    }

    /// Evaluates every offset. Offsets where all generations fail are dropped with a
    /// warning; the zero offset must survive.
    pub fn grid_search(&self, grid: &[Offset]) -> Result<GridResult, SelectionError> {
        if grid.is_empty() {
            return Err(SelectionError::EmptyGrid);
        }
        if !grid.iter().any(Offset::is_zero) {
            return Err(SelectionError::MissingZeroPoint);
        }
        let estimates: Vec<Result<(QualityVector, usize), SelectionError>> =
            grid.par_iter().map(|o| self.expected_quality(o)).collect();

        let mut kept = Vec::with_capacity(grid.len());
        let mut dropped = Vec::new();
        for (offset, estimate) in grid.iter().zip(estimates) {
            match estimate {
                Ok((q, n)) => kept.push((*offset, q, n)),
                Err(SelectionError::AllGenerationsFailed(o)) => {
                    warn!("offset ({}, {}, {}): every generation failed, dropped", o.sem, o.syn, o.lex);
                    dropped.push(o);
                }
                Err(e) => return Err(e),
            }
        }
        let zero = kept.iter().find(|(o, ..)| o.is_zero()).map(|(_, q, _)| *q).ok_or(SelectionError::MissingZeroPoint)?;
        let mut rows: Vec<GridRow> = kept
            .into_iter()
            .map(|(offset, q, n)| GridRow {
                offset,
                q_tilde: q,
                responsiveness: [q.sem - zero.sem, q.syn - zero.syn, q.lex - zero.lex],
                n,
            })
            .collect();
        rows.sort_by(|a, b| a.offset.lex_cmp(&b.offset));
        Ok(GridResult { rows, dim_std: self.dim_std, dropped })
    }
}

fn population_std(values: impl Iterator<Item = QualityVector>) -> [f64; 3] {
    let values: Vec<[f64; 3]> = values.map(QualityVector::to_array).collect();
    if values.is_empty() {
        return [0.0; 3];
    }
    let n = values.len() as f64;
    [0, 1, 2].map(|d| {
        let mean = values.iter().map(|v| v[d]).sum::<f64>() / n;
        (values.iter().map(|v| (v[d] - mean).powi(2)).sum::<f64>() / n).sqrt()
    })
}

pub fn expected_quality(
    generator: &Generator,
    model: &ReferenceModel,
    dev: &[DevItem],
    offset: &Offset,
    scorer: &SemanticScorer,
) -> Result<(QualityVector, usize), SelectionError> {
    GridContext::prepare(generator, model, dev, scorer)?.expected_quality(offset)
}

pub fn grid_search(
    generator: &Generator,
    model: &ReferenceModel,
    dev: &[DevItem],
    grid: &[Offset],
    scorer: &SemanticScorer,
) -> Result<GridResult, SelectionError> {
    GridContext::prepare(generator, model, dev, scorer)?.grid_search(grid)
}

/// Semantic floor for operation-point selection: `baseline_sem + min_sem_advantage`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemConstraint {
    pub min_sem_advantage: f64,
    pub baseline_sem: f64,
}

impl SemConstraint {
    pub fn new(baseline_sem: f64) -> Self {
        Self { min_sem_advantage: DEFAULT_SEM_MARGIN, baseline_sem }
    }

    pub fn required(&self) -> f64 {
        self.baseline_sem + self.min_sem_advantage
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperationPoint {
    pub offset: Offset,
    pub expected: QualityVector,
    pub diversity: f64,
}

/// Among rows meeting the semantic floor, the one with the highest diversity; ties go to
/// higher semantic similarity, then smaller L1 offset norm, then lexicographic offset order.
pub fn select_operation_point(rows: &[GridRow], constraint: &SemConstraint) -> Result<OperationPoint, SelectionError> {
    if rows.is_empty() {
        return Err(SelectionError::EmptyGrid);
    }
    let required = constraint.required();
    let better = |a: &GridRow, b: &GridRow| -> Ordering {
        a.diversity()
            .total_cmp(&b.diversity())
            .then(a.q_tilde.sem.total_cmp(&b.q_tilde.sem))
            .then(b.offset.l1().total_cmp(&a.offset.l1()))
            .then(b.offset.lex_cmp(&a.offset))
    };
    let best = rows
        .iter()
        .filter(|r| r.q_tilde.sem >= required)
        .reduce(|best, r| if better(r, best) == Ordering::Greater { r } else { best });
    match best {
        Some(r) => Ok(OperationPoint { offset: r.offset, expected: r.q_tilde, diversity: r.diversity() }),
        None => Err(SelectionError::NoFeasibleOffset {
            required,
            max_sem: rows.iter().map(|r| r.q_tilde.sem).fold(f64::NEG_INFINITY, f64::max),
        }),
    }
}

fn fixed4(v: f64) -> String {
    let s = format!("{v:.4}");
    if s == "-0.0000" {
        "0.0000".to_string()
    } else {
        s
    }
}

/// Heatmap CSV: [`HEATMAP_HEADER`] then one row per offset in lexicographic offset order,
/// values with 4 decimals.
pub fn heatmap_csv(grid: &GridResult) -> String {
    let mut rows: Vec<&GridRow> = grid.rows.iter().collect();
    rows.sort_by(|a, b| a.offset.lex_cmp(&b.offset));
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(HEATMAP_HEADER);
    out.push('\n');
    for r in rows {
        let values = [
            r.offset.sem,
            r.offset.syn,
            r.offset.lex,
            r.q_tilde.sem,
            r.q_tilde.syn,
            r.q_tilde.lex,
            r.responsiveness[0],
            r.responsiveness[1],
            r.responsiveness[2],
            r.diversity(),
        ];
        for v in values {
            out.push_str(&fixed4(v));
            out.push(',');
        }
        let _ = writeln!(out, "{}", r.n);
    }
    out
}

pub fn export_heatmap_csv(grid: &GridResult, path: impl AsRef<Path>) -> Result<(), SelectionError> {
    let path = path.as_ref();
    fs::write(path, heatmap_csv(grid)).map_err(|source| SelectionError::Io { path: path.display().to_string(), source })
}

/// Reads rows back from a heatmap CSV (values carry the file's 4-decimal precision).
pub fn parse_heatmap_csv(text: &str) -> Result<Vec<GridRow>, SelectionError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == HEATMAP_HEADER => {}
        _ => return Err(SelectionError::MalformedHeatmap { line: 1, message: "missing or unexpected header".into() }),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |message: String| SelectionError::MalformedHeatmap { line: i + 1, message };
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 11 {
            return Err(bad(format!("expected 11 columns, found {}", cols.len())));
        }
        let mut v = [0.0; 10];
        for (slot, col) in v.iter_mut().zip(&cols) {
            *slot = col.parse().map_err(|_| bad(format!("not a number: {col:?}")))?;
        }
        let n: usize = cols[10].parse().map_err(|_| bad(format!("not a count: {:?}", cols[10])))?;
        let q_tilde = QualityVector::new(v[3], v[4], v[5]).map_err(|e| bad(e.to_string()))?;
        rows.push(GridRow {
            offset: Offset::new(v[0], v[1], v[2]),
            q_tilde,
            responsiveness: [v[6], v[7], v[8]],
            n,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(o: [f64; 3], q: [f64; 3]) -> GridRow {
        GridRow { offset: Offset::new(o[0], o[1], o[2]), q_tilde: QualityVector::from_array(q), responsiveness: [0.0; 3], n: 1 }
    }

    #[test]
    fn default_grid_has_1331_points() {
        let offsets = OffsetGrid::default().offsets();
        assert_eq!(offsets.len(), 1331);
        assert!(offsets[0].is_zero());
        assert_eq!(offsets[1], Offset::new(0.0, 0.0, 5.0));
        assert_eq!(offsets[1330], Offset::new(50.0, 50.0, 50.0));
    }

    #[test]
    fn axis_parsing() {
        assert_eq!("0:5:50".parse::<AxisRange>().unwrap().values().len(), 11);
        assert_eq!("0:0.5:2".parse::<AxisRange>().unwrap().values(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!("-10:5:10".parse::<AxisRange>().unwrap().values().len(), 5);
        for bad in ["0:0:5", "5:1:0", "a:1:2", "0:1", "0:1:2:3"] {
            assert!(bad.parse::<AxisRange>().is_err(), "{bad}");
        }
    }

    #[test]
    fn single_feasible_point() {
        let rows = [row([0.0, 0.0, 0.0], [70.0, 10.0, 10.0]), row([0.0, 5.0, 0.0], [60.0, 40.0, 40.0])];
        let p = select_operation_point(&rows, &SemConstraint::new(60.0)).unwrap();
        assert_eq!(p.offset, Offset::ZERO);
        assert_eq!(p.diversity, 10.0);
    }

    #[test]
    fn argmax_violating_constraint_falls_back_to_next_best() {
        let rows = [
            row([0.0, 0.0, 0.0], [80.0, 10.0, 10.0]),
            row([0.0, 5.0, 5.0], [76.0, 20.0, 20.0]),
            row([0.0, 10.0, 10.0], [70.0, 40.0, 40.0]),
        ];
        let p = select_operation_point(&rows, &SemConstraint::new(70.0)).unwrap();
        assert_eq!(p.offset, Offset::new(0.0, 5.0, 5.0));
    }

    #[test]
    fn tie_breaks() {
        // Same diversity: higher sem wins.
        let rows = [row([0.0, 0.0, 5.0], [80.0, 20.0, 10.0]), row([0.0, 5.0, 0.0], [81.0, 10.0, 20.0])];
        assert_eq!(select_operation_point(&rows, &SemConstraint::new(0.0)).unwrap().offset, Offset::new(0.0, 5.0, 0.0));
        // Same diversity and sem: smaller L1 norm wins, then lexicographic order.
        let rows = [
            row([0.0, 5.0, 5.0], [80.0, 20.0, 10.0]),
            row([0.0, 0.0, 5.0], [80.0, 10.0, 20.0]),
            row([5.0, 0.0, 0.0], [80.0, 15.0, 15.0]),
        ];
        assert_eq!(select_operation_point(&rows, &SemConstraint::new(0.0)).unwrap().offset, Offset::new(0.0, 0.0, 5.0));
    }

    #[test]
    fn infeasible_reports_best_sem() {
        let rows = [row([0.0, 0.0, 0.0], [70.0, 10.0, 10.0]), row([5.0, 0.0, 0.0], [72.0, 10.0, 10.0])];
        match select_operation_point(&rows, &SemConstraint::new(70.0)) {
            Err(SelectionError::NoFeasibleOffset { required, max_sem }) => {
                assert_eq!(required, 75.0);
                assert_eq!(max_sem, 72.0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(select_operation_point(&[], &SemConstraint::new(0.0)), Err(SelectionError::EmptyGrid)));
    }

    #[test]
    fn heatmap_round_trip() {
        let grid = GridResult {
            rows: vec![
                GridRow { responsiveness: [1.0, 2.0, -0.00001], ..row([0.0, 0.0, 5.0], [80.0, 20.0, 10.0]) },
                row([0.0, 0.0, 0.0], [79.0, 18.0, 10.00001]),
            ],
            dim_std: [1.0; 3],
            dropped: vec![],
        };
        let csv = heatmap_csv(&grid);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], HEATMAP_HEADER);
        assert_eq!(lines[1], "0.0000,0.0000,0.0000,79.0000,18.0000,10.0000,0.0000,0.0000,0.0000,14.0000,1");
        assert_eq!(lines[2], "0.0000,0.0000,5.0000,80.0000,20.0000,10.0000,1.0000,2.0000,0.0000,15.0000,1");
        let parsed = parse_heatmap_csv(&csv).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[1].offset, Offset::new(0.0, 0.0, 5.0));
        assert!(parse_heatmap_csv("nope\n").is_err());
        assert!(parse_heatmap_csv(&format!("{HEATMAP_HEADER}\n1,2,3\n")).is_err());
    }
}
