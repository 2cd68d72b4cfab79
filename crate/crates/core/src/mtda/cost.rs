use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::kalman::{innovation, Measurement, Track};
use super::linalg::{det2, inv2, quad2, Mat2};

/// χ²(2 dof) 99% quantile.
pub const DEFAULT_GATE: f64 = 9.21;
/// Miss and false-alarm costs default to this fraction of the largest gated cost.
pub const DEFAULT_MISS_FRACTION: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssociationCost {
    /// Squared Mahalanobis distance of the innovation.
    pub d2: f64,
    /// Negative log-likelihood in nats.
    pub c: f64,
    pub s: Mat2,
}

/// `d² = νᵀS⁻¹ν`, `c = ½(d² + ln det(2πS))`.
pub fn association_cost(track: &Track, meas: &Measurement) -> Result<AssociationCost> {
    let (nu, s) = innovation(track, meas);
    cost_from_innovation(nu, s)
}

pub fn cost_from_innovation(nu: [f64; 2], s: Mat2) -> Result<AssociationCost> {
    let si = inv2(&s).ok_or(Error::Singular)?;
    let d2 = quad2(&si, &nu);
    let two_pi = 2.0 * std::f64::consts::PI;
    let c = 0.5 * (d2 + (two_pi * two_pi * det2(&s)).ln());
    Ok(AssociationCost { d2, c, s })
}

/// Track × measurement costs with gating mask and miss/false-alarm costs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostMatrix {
    n_tracks: usize,
    n_meas: usize,
    /// Row-major; NaN where gated out.
    cost: Vec<f64>,
    mask: Vec<bool>,
    pub c_miss: f64,
    pub c_fa: f64,
}

impl CostMatrix {
    pub fn new(n_tracks: usize, n_meas: usize, cost: Vec<f64>, mask: Vec<bool>, c_miss: f64, c_fa: f64) -> Result<Self> {
        let n = n_tracks * n_meas;
        if cost.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: cost.len() });
        }
        if mask.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: mask.len() });
        }
        if !c_miss.is_finite() || !c_fa.is_finite() {
            return Err(Error::InvalidArgument("miss and false-alarm costs must be finite".into()));
        }
        let mut cost = cost;
        for (c, &m) in cost.iter_mut().zip(&mask) {
            if !m {
                *c = f64::NAN;
            } else if !c.is_finite() {
                return Err(Error::InvalidArgument("gated-in cost must be finite".into()));
            }
        }
        Ok(Self { n_tracks, n_meas, cost, mask, c_miss, c_fa })
    }

    /// Ungated matrix from rows.
    pub fn from_rows(rows: &[Vec<f64>], c_miss: f64, c_fa: f64) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidArgument("ragged cost rows".into()));
        }
        Self::new(n, m, rows.concat(), vec![true; n * m], c_miss, c_fa)
    }

    /// Rows with `None` marking gated-out pairs.
    pub fn from_gated_rows(rows: &[Vec<Option<f64>>], c_miss: f64, c_fa: f64) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidArgument("ragged cost rows".into()));
        }
        let flat: Vec<Option<f64>> = rows.concat();
        Self::new(
            n,
            m,
            flat.iter().map(|c| c.unwrap_or(f64::NAN)).collect(),
            flat.iter().map(Option::is_some).collect(),
            c_miss,
            c_fa,
        )
    }

    pub fn n_tracks(&self) -> usize {
        self.n_tracks
    }

    pub fn n_meas(&self) -> usize {
        self.n_meas
    }

    pub fn is_gated(&self, i: usize, j: usize) -> bool {
        self.mask[i * self.n_meas + j]
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let k = i * self.n_meas + j;
        self.mask[k].then(|| self.cost[k])
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn gated_pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n_tracks)
            .flat_map(move |i| (0..self.n_meas).map(move |j| (i, j)))
            .filter_map(|(i, j)| self.get(i, j).map(|c| (i, j, c)))
    }

    pub fn n_gated(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    /// Largest `|c_ij|` over gated pairs (0 when everything is gated out).
    pub fn max_abs_cost(&self) -> f64 {
        self.gated_pairs().fold(0.0, |m, (_, _, c)| m.max(c.abs()))
    }

    pub fn with_miss_fa(mut self, c_miss: f64, c_fa: f64) -> Self {
        self.c_miss = c_miss;
        self.c_fa = c_fa;
        self
    }
}

/// Gated cost matrix. With `miss_fa = None` both costs default to
/// `0.7·max|c_ij|` over gated pairs.
pub fn build_cost_matrix(
    tracks: &[Track],
    measurements: &[Measurement],
    gate: f64,
    miss_fa: Option<(f64, f64)>,
) -> Result<CostMatrix> {
    let (n, m) = (tracks.len(), measurements.len());
    let mut cost = vec![f64::NAN; n * m];
    let mut mask = vec![false; n * m];
    for (i, t) in tracks.iter().enumerate() {
        for (j, z) in measurements.iter().enumerate() {
            let ac = association_cost(t, z)?;
            if ac.d2 <= gate {
                cost[i * m + j] = ac.c;
                mask[i * m + j] = true;
            }
        }
    }
    let cm = CostMatrix::new(n, m, cost, mask, 0.0, 0.0)?;
    let (c_miss, c_fa) = miss_fa.unwrap_or_else(|| {
        let c = DEFAULT_MISS_FRACTION * cm.max_abs_cost();
        (c, c)
    });
    Ok(cm.with_miss_fa(c_miss, c_fa))
}

/// A complete association: every track paired or missed, every measurement
/// paired or a false alarm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub pairs: Vec<(usize, usize)>,
    pub missed: Vec<usize>,
    pub false_alarms: Vec<usize>,
    pub objective: f64,
}

impl Assignment {
    /// Completes `pairs` with misses and false alarms and scores it.
    pub fn from_pairs(cost: &CostMatrix, mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        pairs.sort_unstable();
        let mut row_used = vec![false; cost.n_tracks()];
        let mut col_used = vec![false; cost.n_meas()];
        let mut objective = 0.0;
        for &(i, j) in &pairs {
            if i >= cost.n_tracks() || j >= cost.n_meas() {
                return Err(Error::InvalidArgument(format!("pair ({i},{j}) out of range")));
            }
            if row_used[i] || col_used[j] {
                return Err(Error::InvalidArgument(format!("pair ({i},{j}) reuses a track or measurement")));
            }
            let c = cost
                .get(i, j)
                .ok_or_else(|| Error::InvalidArgument(format!("pair ({i},{j}) is gated out")))?;
            row_used[i] = true;
            col_used[j] = true;
            objective += c;
        }
        let missed: Vec<usize> = (0..cost.n_tracks()).filter(|&i| !row_used[i]).collect();
        let false_alarms: Vec<usize> = (0..cost.n_meas()).filter(|&j| !col_used[j]).collect();
        objective += cost.c_miss * missed.len() as f64 + cost.c_fa * false_alarms.len() as f64;
        Ok(Self { pairs, missed, false_alarms, objective })
    }

    pub fn n_assigned(&self) -> usize {
        self.pairs.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mtda::linalg::identity4;
    use approx::assert_abs_diff_eq;

    #[test]
    fn closed_form_costs() {
        let ln2pi = (2.0 * std::f64::consts::PI).ln();
        let eye = [[1.0, 0.0], [0.0, 1.0]];
        let c = cost_from_innovation([0.0, 0.0], eye).unwrap();
        assert_abs_diff_eq!(c.d2, 0.0);
        assert_abs_diff_eq!(c.c, ln2pi, epsilon = 1e-12);
        assert_abs_diff_eq!(ln2pi, 1.8379, epsilon = 1e-4);
        let c = cost_from_innovation([3.0, 0.0], eye).unwrap();
        assert_abs_diff_eq!(c.d2, 9.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.c, 6.3379, epsilon = 1e-4);
        let c = cost_from_innovation([2.0, 0.0], [[4.0, 0.0], [0.0, 4.0]]).unwrap();
        assert_abs_diff_eq!(c.d2, 1.0, epsilon = 1e-12);
        assert!(cost_from_innovation([1.0, 0.0], [[0.0, 0.0], [0.0, 0.0]]).is_err());
    }

    fn track_at(x: f64) -> Track {
        // Zero-ish prior covariance so S ≈ R.
        let mut p = identity4();
        for (i, row) in p.iter_mut().enumerate() {
            row[i] = 1e-12;
        }
        Track::new([x, 0.0, 0.0, 0.0], p).unwrap()
    }

    #[test]
    fn gate_boundary() {
        let t = track_at(0.0);
        let kept = Measurement::isotropic([9.20f64.sqrt(), 0.0], 1.0 - 1e-12).unwrap();
        let cut = Measurement::isotropic([9.22f64.sqrt(), 0.0], 1.0 - 1e-12).unwrap();
        let cm = build_cost_matrix(&[t], &[kept, cut], DEFAULT_GATE, None).unwrap();
        assert!(cm.is_gated(0, 0));
        assert!(!cm.is_gated(0, 1));
        assert_abs_diff_eq!(cm.c_miss, 0.7 * cm.get(0, 0).unwrap().abs(), epsilon = 1e-12);
    }

    #[test]
    fn assignment_bookkeeping() {
        let cm = CostMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]], 5.0, 7.0).unwrap();
        let a = Assignment::from_pairs(&cm, vec![(1, 1)]).unwrap();
        assert_eq!(a.missed, vec![0]);
        assert_eq!(a.false_alarms, vec![0]);
        assert_abs_diff_eq!(a.objective, 13.0);
        assert!(Assignment::from_pairs(&cm, vec![(0, 0), (1, 0)]).is_err());
    }
}
