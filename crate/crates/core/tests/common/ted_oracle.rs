//! Brute-force tree edit distance over explicit tree mappings.
//!
//! A shape is an ordered unlabeled tree stored in preorder as subtree sizes. A mapping
//! between two shapes is a set of node pairs that is one-to-one, keeps preorder order and
//! keeps the ancestor relation in both directions. Under unit costs a mapping `M` costs
//! `(n1 - |M|) + (n2 - |M|) + mismatches(M)`, and dropping a pair from a mapping never
//! lowers that cost, so the minimum is reached on an inclusion-maximal mapping.

use qcpg_core::tree_metrics::ParseTree;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    /// Subtree size of each node, in preorder.
    pub sizes: Vec<usize>,
}

impl Shape {
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    fn is_ancestor(&self, i: usize, j: usize) -> bool {
        i < j && j < i + self.sizes[i]
    }

    /// Builds the tree with `labels[k]` on preorder node `k`.
    pub fn tree(&self, labels: &[&str]) -> ParseTree {
        fn build(shape: &Shape, labels: &[&str], at: usize) -> ParseTree {
            let mut children = Vec::new();
            let mut child = at + 1;
            while child < at + shape.sizes[at] {
                children.push(build(shape, labels, child));
                child += shape.sizes[child];
            }
            ParseTree::node(labels[at], children).unwrap()
        }
        build(self, labels, 0)
    }
}

/// All ordered shapes with exactly `n` nodes.
pub fn shapes(n: usize) -> Vec<Shape> {
    // A root followed by an ordered forest of n - 1 nodes.
    fn forests(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 1..=n {
            for head in shapes(first) {
                for tail in forests(n - first) {
                    let mut v = head.sizes.clone();
                    v.extend(tail);
                    out.push(v);
                }
            }
        }
        out
    }
    if n == 0 {
        return vec![];
    }
    forests(n - 1)
        .into_iter()
        .map(|rest| {
            let mut sizes = vec![n];
            sizes.extend(rest);
            Shape { sizes }
        })
        .collect()
}

/// Every valid mapping between `a` and `b`, as bitsets over `i * b.len() + j`.
pub fn all_mappings(a: &Shape, b: &Shape) -> Vec<u64> {
    fn go(a: &Shape, b: &Shape, i: usize, pairs: &mut Vec<(usize, usize)>, out: &mut Vec<u64>) {
        if i == a.len() {
            out.push(pairs.iter().fold(0u64, |m, &(x, y)| m | 1 << (x * b.len() + y)));
            return;
        }
        go(a, b, i + 1, pairs, out);
        let start = pairs.last().map_or(0, |&(_, y)| y + 1);
        for j in start..b.len() {
            if pairs.iter().all(|&(x, y)| a.is_ancestor(x, i) == b.is_ancestor(y, j)) {
                pairs.push((i, j));
                go(a, b, i + 1, pairs, out);
                pairs.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(a, b, 0, &mut Vec::new(), &mut out);
    out
}

/// Mappings not strictly contained in another valid mapping, largest first.
pub fn maximal_mappings(a: &Shape, b: &Shape) -> Vec<u64> {
    let all = all_mappings(a, b);
    let mut maximal: Vec<u64> =
        all.iter().copied().filter(|&m| !all.iter().any(|&o| o != m && o & m == m)).collect();
    maximal.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
    maximal
}

/// Unit-cost distance given the mapping list for the shape pair and the bitset of node
/// pairs carrying equal labels.
pub fn distance(n1: usize, n2: usize, mappings: &[u64], equal: u64) -> usize {
    let mut best = 0;
    for &m in mappings {
        let size = m.count_ones() as usize;
        if 2 * size <= best {
            break;
        }
        best = best.max(size + (m & equal).count_ones() as usize);
    }
    n1 + n2 - best
}

/// Equal-label bitset for two labelings.
pub fn equal_mask(l1: &[u8], l2: &[u8]) -> u64 {
    let mut mask = 0u64;
    for (i, x) in l1.iter().enumerate() {
        for (j, y) in l2.iter().enumerate() {
            if x == y {
                mask |= 1 << (i * l2.len() + j);
            }
        }
    }
    mask
}
