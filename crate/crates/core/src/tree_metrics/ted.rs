//! Ordered tree edit distance (Zhang–Shasha) and the normalized syntactic distance built on it.

use std::hash::{DefaultHasher, Hash, Hasher};

use thiserror::Error;

use super::tree::ParseTree;

/// Depth kept when comparing the syntax of two sentences.
pub const SYNTAX_LEVEL: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("edit costs must be finite and non-negative (insert {insert}, delete {delete}, relabel {relabel})")]
pub struct InvalidCost {
    pub insert: f64,
    pub delete: f64,
    pub relabel: f64,
}

/// Per-operation costs. Relabeling a node to an identical label is always free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EditCost {
    insert: f64,
    delete: f64,
    relabel: f64,
}

impl EditCost {
    pub const UNIT: EditCost = EditCost { insert: 1.0, delete: 1.0, relabel: 1.0 };

    pub fn new(insert: f64, delete: f64, relabel: f64) -> Result<Self, InvalidCost> {
        let ok = |c: f64| c.is_finite() && c >= 0.0;
        if ok(insert) && ok(delete) && ok(relabel) {
            Ok(Self { insert, delete, relabel })
        } else {
            Err(InvalidCost { insert, delete, relabel })
        }
    }

    pub fn insert(&self) -> f64 {
        self.insert
    }

    pub fn delete(&self) -> f64 {
        self.delete
    }

    pub fn relabel(&self) -> f64 {
        self.relabel
    }
}

impl Default for EditCost {
    fn default() -> Self {
        Self::UNIT
    }
}

/// A tree flattened into the postorder arrays Zhang–Shasha works on.
///
/// Build one per tree when the same tree takes part in many distance computations.
#[derive(Debug, Clone)]
pub struct PreparedTree {
    // 1-based postorder; index 0 is unused padding.
    labels: Vec<(Box<str>, bool)>,
    hashes: Vec<u64>,
    lld: Vec<usize>,
    keyroots: Vec<usize>,
}

impl PreparedTree {
    pub fn new(tree: &ParseTree) -> Self {
        let n = tree.node_count();
        let mut labels = Vec::with_capacity(n + 1);
        let mut lld = Vec::with_capacity(n + 1);
        labels.push((Box::from(""), false));
        lld.push(0);

        // Iterative postorder: (node, next child index, leftmost leaf so far).
        let mut stack: Vec<(&ParseTree, usize, usize)> = vec![(tree, 0, 0)];
        while let Some(top) = stack.last_mut() {
            let (node, next, _) = *top;
            if next < node.children().len() {
                top.1 += 1;
                stack.push((&node.children()[next], 0, 0));
                continue;
            }
            let (node, _, first_leaf) = stack.pop().expect("non-empty");
            let index = labels.len();
            let leftmost = if node.is_leaf() { index } else { first_leaf };
            labels.push((Box::from(node.label()), node.is_token()));
            lld.push(leftmost);
            if let Some(parent) = stack.last_mut() {
                // The first finished child reports the parent's leftmost leaf.
                if parent.2 == 0 {
                    parent.2 = leftmost;
                }
            }
        }

        // A keyroot is the highest node sharing its leftmost leaf.
        let mut seen = vec![false; n + 1];
        let mut keyroots = Vec::new();
        for i in (1..=n).rev() {
            if !seen[lld[i]] {
                seen[lld[i]] = true;
                keyroots.push(i);
            }
        }
        keyroots.reverse();
        let hashes = labels
            .iter()
            .map(|label| {
                let mut h = DefaultHasher::new();
                label.hash(&mut h);
                h.finish()
            })
            .collect();
        Self { labels, hashes, lld, keyroots }
    }

    pub fn len(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Reusable dynamic-programming buffers for [`PreparedTree`] distances.
#[derive(Debug, Default)]
pub struct TedScratch {
    tree_dist: Vec<f64>,
    forest_dist: Vec<f64>,
    relabel: Vec<f64>,
}

impl TedScratch {
    pub fn distance(&mut self, a: &PreparedTree, b: &PreparedTree, costs: &EditCost) -> f64 {
        let (n, m) = (a.len(), b.len());
        let width = m + 1;
        let (del, ins) = (costs.delete, costs.insert);
        // Every cell is written before it is read, so buffers only ever grow.
        grow(&mut self.tree_dist, (n + 1) * width);
        grow(&mut self.relabel, (n + 1) * width);
        for di in 1..=n {
            let row = &mut self.relabel[di * width..(di + 1) * width];
            for dj in 1..=m {
                let same = a.hashes[di] == b.hashes[dj] && a.labels[di] == b.labels[dj];
                row[dj] = if same { 0.0 } else { costs.relabel };
            }
        }
        grow(&mut self.forest_dist, (n + 2) * (m + 2));
        let td = &mut self.tree_dist;
        let fd = &mut self.forest_dist;
        let relabel = &self.relabel;

        for &i in &a.keyroots {
            let li = a.lld[i];
            for &j in &b.keyroots {
                let lj = b.lld[j];
                // Forest distances for a[li..=di] vs b[lj..=dj], shifted so row 0 and
                // column 0 stand for the empty forest.
                let w = j - lj + 2;
                fd[0] = 0.0;
                for c in 1..w {
                    fd[c] = fd[c - 1] + ins;
                }
                for r in 1..i - li + 2 {
                    let di = li + r - 1;
                    let whole_a = a.lld[di] == li;
                    let sub_row = (a.lld[di] - li) * w;
                    let (done, rest) = fd.split_at_mut(r * w);
                    let prev = &done[(r - 1) * w..r * w];
                    let sub = &done[sub_row..sub_row + w];
                    let cur = &mut rest[..w];
                    let td_row = &mut td[di * width + lj..di * width + j + 1];
                    let rel_row = &relabel[di * width + lj..di * width + j + 1];
                    let mut left = prev[0] + del;
                    cur[0] = left;
                    let cells = cur[1..].iter_mut().zip(prev.windows(2)).zip(&b.lld[lj..=j]).zip(rel_row).zip(td_row);
                    for ((((out, up), &lld_b), &rel), tree) in cells {
                        let edge = (up[1] + del).min(left + ins);
                        left = if whole_a && lld_b == lj {
                            let best = edge.min(up[0] + rel);
                            *tree = best;
                            best
                        } else {
                            edge.min(sub[lld_b - lj] + *tree)
                        };
                        *out = left;
                    }
                }
            }
        }
        td[n * width + m]
    }
}

fn grow(buf: &mut Vec<f64>, len: usize) {
    if buf.len() < len {
        buf.resize(len, 0.0);
    }
}

/// Minimal cost of node insertions, deletions and relabelings turning `a` into `b`
/// while preserving ancestry and sibling order.
pub fn tree_edit_distance(a: &ParseTree, b: &ParseTree, costs: &EditCost) -> f64 {
    TedScratch::default().distance(&PreparedTree::new(a), &PreparedTree::new(b), costs)
}

/// The skeleton compared by [`syntactic_distance`]: tokens removed, cut at [`SYNTAX_LEVEL`].
pub fn syntax_skeleton(tree: &ParseTree) -> ParseTree {
    tree.strip_tokens().prune_to_level(SYNTAX_LEVEL)
}

/// Normalized syntactic distance on a 0–100 scale.
///
/// Both raw parses are reduced with [`syntax_skeleton`], compared with unit-cost
/// edit distance, and divided by the larger skeleton's node count.
pub fn syntactic_distance(a: &ParseTree, b: &ParseTree) -> f64 {
    let (a, b) = (syntax_skeleton(a), syntax_skeleton(b));
    let (a, b) = (PreparedTree::new(&a), PreparedTree::new(&b));
    syntactic_distance_prepared(&a, &b, &mut TedScratch::default())
}

/// [`syntactic_distance`] over skeletons that were already reduced and prepared.
pub fn syntactic_distance_prepared(a: &PreparedTree, b: &PreparedTree, scratch: &mut TedScratch) -> f64 {
    let denom = a.len().max(b.len()) as f64;
    let ted = scratch.distance(a, b, &EditCost::UNIT);
    100.0 * (ted / denom).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree_metrics::parse_bracketed;

    fn t(s: &str) -> ParseTree {
        parse_bracketed(s).unwrap()
    }

    fn ted(a: &str, b: &str) -> f64 {
        tree_edit_distance(&t(a), &t(b), &EditCost::UNIT)
    }

    #[test]
    fn forced_deletion() {
        assert_eq!(ted("(A (B) (C))", "(A (B))"), 1.0);
        assert_eq!(ted("(A (B))", "(A (B) (C))"), 1.0);
    }

    #[test]
    fn identity_is_zero() {
        for s in ["(A)", "(A (B) (C))", "(S (NP (DT the) (NN cat)) (VP (VBD sat)))"] {
            assert_eq!(ted(s, s), 0.0);
        }
    }

    #[test]
    fn textbook_pair() {
        // Zhang & Shasha's running example: f(d(a c(b)) e) vs f(c(d(a b)) e).
        assert_eq!(ted("(f (d (a) (c (b))) (e))", "(f (c (d (a) (b))) (e))"), 2.0);
    }

    #[test]
    fn mixed_edits() {
        // Y cannot stay mapped once it changes parent: relabel C->D, delete Y, insert Y.
        // Frozen from the mapping-enumeration oracle in tests/tree_oracle.rs.
        assert_eq!(ted("(A (B (X) (Y)) (C))", "(A (B (X)) (D (Y)))"), 3.0);
    }

    #[test]
    fn weighted_costs() {
        let costs = EditCost::new(2.0, 3.0, 10.0).unwrap();
        let d = tree_edit_distance(&t("(A (B))"), &t("(A (C))"), &costs);
        // Delete B then insert C beats relabeling at cost 10.
        assert_eq!(d, 5.0);
        assert!(EditCost::new(-1.0, 1.0, 1.0).is_err());
        assert!(EditCost::new(1.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn token_and_node_with_same_label_differ() {
        assert_eq!(ted("(A x)", "(A (x))"), 1.0);
    }

    #[test]
    fn syntactic_distance_examples() {
        let s = t("(S (NP (DT the) (NN cat)) (VP (VBD sat)))");
        assert_eq!(syntactic_distance(&s, &s), 0.0);
        let d = syntactic_distance(&t("(A (B) (C))"), &t("(A (B))"));
        assert!((d - 100.0 / 3.0).abs() < 1e-12);
        // Tokens never matter.
        let d = syntactic_distance(&t("(NP (DT the) (NN cat))"), &t("(NP (DT a) (NN dog))"));
        assert_eq!(d, 0.0);
    }

    #[test]
    fn syntactic_distance_ignores_depth_beyond_three() {
        let a = t("(S (NP (NP (DT a))) (VP (VB b)))");
        let b = t("(S (NP (NP (NN a) (NN b))) (VP (VB b)))");
        assert_eq!(syntactic_distance(&a, &b), 0.0);
    }

    #[test]
    fn keyroots_of_small_tree() {
        // Postorder of (A (B) (C)): B=1, C=2, A=3; C and A are keyroots.
        let p = PreparedTree::new(&t("(A (B) (C))"));
        assert_eq!(p.keyroots, vec![2, 3]);
        assert_eq!(p.lld[1..], [1, 2, 1]);
    }
}
