use crate::error::Result;
use crate::mtda::{Assignment, CostMatrix};

/// Minimum-cost perfect matching on a square matrix (row-major `n×n`).
/// Returns `col_of_row`.
pub fn solve_square(a: &[f64], n: usize) -> Vec<usize> {
    // Shortest augmenting paths with row/column potentials, 1-based inside.
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = a[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut col_of_row = vec![0; n];
    for j in 1..=n {
        if p[j] > 0 {
            col_of_row[p[j] - 1] = j - 1;
        }
    }
    col_of_row
}

/// Stand-in for a forbidden pairing.
pub fn big_m(cost: &CostMatrix) -> f64 {
    let scale = cost.max_abs_cost().max(cost.c_miss.abs()).max(cost.c_fa.abs()).max(1.0);
    1e6 * scale
}

/// `(N+M)²` augmented matrix: tracks × measurements, a miss diagonal, a
/// false-alarm diagonal and a zero slack block.
pub fn augmented_matrix(cost: &CostMatrix) -> Vec<f64> {
    let (n, m) = (cost.n_tracks(), cost.n_meas());
    let k = n + m;
    let big = big_m(cost);
    let mut a = vec![big; k * k];
    for i in 0..n {
        for j in 0..m {
            if let Some(c) = cost.get(i, j) {
                a[i * k + j] = c;
            }
        }
        a[i * k + m + i] = cost.c_miss;
    }
    for l in 0..m {
        a[(n + l) * k + l] = cost.c_fa;
        for kk in 0..n {
            a[(n + l) * k + m + kk] = 0.0;
        }
    }
    a
}

/// Optimal association with misses and false alarms.
pub fn hungarian_solve(cost: &CostMatrix) -> Result<Assignment> {
    let (n, m) = (cost.n_tracks(), cost.n_meas());
    let k = n + m;
    if k == 0 {
        return Assignment::from_pairs(cost, Vec::new());
    }
    let a = augmented_matrix(cost);
    let cols = solve_square(&a, k);
    let pairs: Vec<(usize, usize)> = (0..n).filter(|&i| cols[i] < m).map(|i| (i, cols[i])).collect();
    debug_assert!(pairs.iter().all(|&(i, j)| cost.is_gated(i, j)));
    Assignment::from_pairs(cost, pairs)
}
