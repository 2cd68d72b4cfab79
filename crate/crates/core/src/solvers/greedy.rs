use crate::error::Result;
use crate::mtda::{Assignment, CostMatrix};

/// Greedy nearest neighbour: cheapest gated pairs first, accepted while the
/// track and measurement are free and `c_ij < c_miss + c_fa`.
pub fn gnn_solve(cost: &CostMatrix) -> Result<Assignment> {
    let mut pairs: Vec<(usize, usize, f64)> = cost.gated_pairs().collect();
    pairs.sort_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
    let mut row_used = vec![false; cost.n_tracks()];
    let mut col_used = vec![false; cost.n_meas()];
    let mut chosen = Vec::new();
    let cutoff = cost.c_miss + cost.c_fa;
    for (i, j, c) in pairs {
        if !row_used[i] && !col_used[j] && c < cutoff {
            row_used[i] = true;
            col_used[j] = true;
            chosen.push((i, j));
        }
    }
    Assignment::from_pairs(cost, chosen)
}
