//! Minimum-cost perfect assignment on a square integer cost matrix (Hungarian method
//! with row/column potentials, O(n³)).

/// Result of [`min_cost_assignment`]: `row_to_col[i]` is the column assigned to row `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub cost: i64,
    pub row_to_col: Vec<usize>,
}

/// Solves the assignment problem for an `n × n` matrix given in row-major order.
///
/// Panics if `costs.len() != n * n`.
pub fn min_cost_assignment(n: usize, costs: &[i64]) -> Assignment {
    assert_eq!(costs.len(), n * n, "cost matrix must be square");
    if n == 0 {
        return Assignment { cost: 0, row_to_col: Vec::new() };
    }
    let cost = |i: usize, j: usize| costs[(i - 1) * n + (j - 1)];

    // 1-based; column 0 is the virtual start of each augmenting path.
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut col_owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for row in 1..=n {
        col_owner[0] = row;
        let mut j0 = 0;
        let mut minv = vec![i64::MAX; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = col_owner[j0];
            let mut delta = i64::MAX;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = cost(i0, j) - u[i0] - v[j];
                if reduced < minv[j] {
                    minv[j] = reduced;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[col_owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if col_owner[j0] == 0 {
                break;
            }
        }
        // Flip the augmenting path.
        loop {
            let j1 = way[j0];
            col_owner[j0] = col_owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_to_col = vec![0; n];
    for j in 1..=n {
        row_to_col[col_owner[j] - 1] = j - 1;
    }
    let total = row_to_col.iter().enumerate().map(|(i, &j)| costs[i * n + j]).sum();
    Assignment { cost: total, row_to_col }
}
