use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mtda::QuboInstance;
use crate::sim::Counts;

/// Hard cap on exhaustive search.
pub const BRUTE_FORCE_CAP: usize = 24;

/// Exhaustive minimum in Gray-code order with O(n) energy deltas. Ties go to
/// the lowest bitstring value. Returns the basis index (variable `k` ↔ bit `k`)
/// and its energy.
pub fn brute_force_qubo(q: &QuboInstance) -> Result<(u64, f64)> {
    let n = q.n_var();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge { n, cap: BRUTE_FORCE_CAP });
    }
    let scale = 1.0 + q.triplets().iter().map(|t| t.2.abs()).sum::<f64>() + q.offset.abs();
    let tie = 1e-9 * scale;
    let mut y = vec![0u8; n];
    let mut e = q.offset;
    let mut best_idx = 0u64;
    let mut best = e;
    let mut idx = 0u64;
    for step in 1u64..1u64 << n {
        let k = step.trailing_zeros() as usize;
        let mut local = q.get(k, k);
        for (j, &yj) in y.iter().enumerate() {
            if j != k && yj == 1 {
                local += q.get(k, j);
            }
        }
        if y[k] == 1 {
            e -= local;
            y[k] = 0;
        } else {
            e += local;
            y[k] = 1;
        }
        idx ^= 1 << k;
        if e < best - tie || (e <= best + tie && idx < best_idx) {
            best = e;
            best_idx = idx;
        }
    }
    Ok((best_idx, q.energy_of_index(best_idx)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decoded {
    pub index: u64,
    pub energy: f64,
    /// `energy / reference` when the reference optimum is negative.
    pub quality: Option<f64>,
    /// `energy − reference`.
    pub gap: f64,
}

/// Best QUBO energy among the `k` most frequent outcomes of `hist`.
pub fn decode_topk(hist: &Counts, q: &QuboInstance, k: usize, reference: f64) -> Result<Decoded> {
    if hist.is_empty() {
        return Err(Error::InvalidArgument("empty histogram".into()));
    }
    let (index, energy) = hist
        .most_frequent(k.max(1))
        .into_iter()
        .map(|(idx, _)| (idx, q.energy_of_index(idx)))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    Ok(Decoded { index, energy, quality: quality_ratio(energy, reference), gap: energy - reference })
}

pub fn quality_ratio(energy: f64, reference: f64) -> Option<f64> {
    (reference < 0.0).then(|| energy / reference)
}
