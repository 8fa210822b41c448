#![allow(dead_code)]

pub mod ted_oracle;

use qcpg_core::tree_metrics::{EditCost, PreparedTree, TedScratch};
use rayon::prelude::*;
use ted_oracle::{distance, equal_mask, maximal_mappings, shapes, Shape};

const LABELS: [&str; 3] = ["a", "b", "c"];

#[derive(Debug, Default)]
pub struct SweepReport {
    /// Pairs on which both sides were evaluated.
    pub evaluated: u64,
    /// Labeled pairs accounted for, counting label renamings of each evaluated pair.
    pub covered: u64,
    /// Total number of labeled pairs in the space.
    pub space: u64,
    pub mismatches: Vec<String>,
}

struct LabeledShapes {
    shape: Shape,
    /// Prepared tree for each labeling, indexed by the base-3 code of its preorder labels.
    prepared: Vec<PreparedTree>,
}

fn labelings(n: usize) -> impl Iterator<Item = Vec<u8>> {
    (0..3usize.pow(n as u32)).map(move |mut code| {
        (0..n)
            .map(|_| {
                let d = (code % 3) as u8;
                code /= 3;
                d
            })
            .collect()
    })
}

fn code(labels: &[u8]) -> usize {
    labels.iter().rev().fold(0, |acc, &d| acc * 3 + d as usize)
}

/// Compares the library distance with the mapping oracle on every pair of labeled trees
/// with at most `max_nodes` nodes over a 3-letter alphabet.
///
/// With `canonical`, each pair is visited once per orbit under renaming of the alphabet:
/// the joint labeling of both trees is enumerated as a restricted-growth string. Both the
/// library and the oracle only compare labels for equality, so every member of an orbit
/// has the same distance on both sides.
pub fn exhaustive_sweep(max_nodes: usize, canonical: bool) -> SweepReport {
    let table: Vec<LabeledShapes> = (1..=max_nodes)
        .flat_map(shapes)
        .map(|shape| {
            let prepared = labelings(shape.len())
                .map(|l| {
                    let names: Vec<&str> = l.iter().map(|&d| LABELS[d as usize]).collect();
                    PreparedTree::new(&shape.tree(&names))
                })
                .collect();
            LabeledShapes { shape, prepared }
        })
        .collect();
    let labeled: u64 = table.iter().map(|t| t.prepared.len() as u64).sum();
    let shape_pairs: Vec<(usize, usize)> =
        (0..table.len()).flat_map(|x| (0..table.len()).map(move |y| (x, y))).collect();
    let mut report = shape_pairs
        .par_iter()
        .map(|&(x, y)| sweep_shape_pair(&table[x], &table[y], canonical))
        .reduce(SweepReport::default, |mut acc, r| {
            acc.evaluated += r.evaluated;
            acc.covered += r.covered;
            acc.mismatches.extend(r.mismatches);
            acc
        });
    report.space = labeled * labeled;
    report.mismatches.truncate(20);
    report
}

fn sweep_shape_pair(s1: &LabeledShapes, s2: &LabeledShapes, canonical: bool) -> SweepReport {
    let mut report = SweepReport::default();
    let mut scratch = TedScratch::default();
    let (n1, n2) = (s1.shape.len(), s2.shape.len());
    let mappings = maximal_mappings(&s1.shape, &s2.shape);
    let mut check = |joint: &[u8], weight: u64, report: &mut SweepReport| {
        let (l1, l2) = joint.split_at(n1);
        let expected = distance(n1, n2, &mappings, equal_mask(l1, l2));
        let got = scratch.distance(&s1.prepared[code(l1)], &s2.prepared[code(l2)], &EditCost::UNIT);
        report.evaluated += 1;
        report.covered += weight;
        if got != expected as f64 && report.mismatches.len() < 20 {
            let name = |shape: &Shape, l: &[u8]| shape.tree(&l.iter().map(|&d| LABELS[d as usize]).collect::<Vec<_>>());
            report.mismatches.push(format!(
                "{} vs {}: library {got}, oracle {expected}",
                name(&s1.shape, l1),
                name(&s2.shape, l2)
            ));
        }
    };
    if canonical {
        let mut joint = vec![0u8; n1 + n2];
        restricted_growth(&mut joint, 0, 0, &mut |j, blocks| check(j, renamings(blocks), &mut report));
    } else {
        let mut joint = vec![0u8; n1 + n2];
        for l1 in labelings(n1) {
            joint[..n1].copy_from_slice(&l1);
            for l2 in labelings(n2) {
                joint[n1..].copy_from_slice(&l2);
                check(&joint, 1, &mut report);
            }
        }
    }
    report
}

/// Injective renamings of `blocks` distinct labels into the 3-letter alphabet.
fn renamings(blocks: usize) -> u64 {
    (0..blocks as u64).map(|k| 3 - k).product()
}

fn restricted_growth(joint: &mut [u8], pos: usize, blocks: usize, visit: &mut impl FnMut(&[u8], usize)) {
    if pos == joint.len() {
        visit(joint, blocks);
        return;
    }
    for d in 0..=blocks.min(2) {
        joint[pos] = d as u8;
        restricted_growth(joint, pos + 1, blocks.max(d + 1), visit);
    }
}
