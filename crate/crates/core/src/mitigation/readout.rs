use rand::Rng;
use serde::{Deserialize, Serialize};

use super::richardson::gauss_solve;
use crate::error::{Error, Result};
use crate::sim::Counts;

/// Per-qubit readout error: `p01` = P(read 1 | prepared 0), `p10` = P(read 0 | prepared 1).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ReadoutError {
    pub p01: f64,
    pub p10: f64,
}

impl ReadoutError {
    pub fn new(p01: f64, p10: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p01) || !(0.0..=1.0).contains(&p10) {
            return Err(Error::InvalidArgument(format!("readout flip probabilities ({p01}, {p10}) outside [0,1]")));
        }
        Ok(Self { p01, p10 })
    }

    pub fn symmetric(p: f64) -> Result<Self> {
        Self::new(p, p)
    }
}

/// Dense column-stochastic matrix, `a[i][j] = P(read i | true j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentMatrix {
    pub a: Vec<Vec<f64>>,
}

impl AssignmentMatrix {
    pub fn new(a: Vec<Vec<f64>>) -> Result<Self> {
        let n = a.len();
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("assignment matrix dimension {n} is not a power of two")));
        }
        if a.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("assignment matrix is not square".into()));
        }
        for j in 0..n {
            let s: f64 = (0..n).map(|i| a[i][j]).sum();
            if (s - 1.0).abs() > 1e-9 || (0..n).any(|i| a[i][j] < 0.0) {
                return Err(Error::InvalidArgument(format!("column {j} is not a probability vector")));
            }
        }
        Ok(Self { a })
    }

    pub fn identity(n_qubits: usize) -> Self {
        let d = 1 << n_qubits;
        Self { a: (0..d).map(|i| (0..d).map(|j| f64::from(u8::from(i == j))).collect()).collect() }
    }

    /// Tensor product of single-qubit confusion matrices, qubit 0 least significant.
    pub fn from_flips(flips: &[ReadoutError]) -> Self {
        let d = 1usize << flips.len();
        let mut a = vec![vec![0.0; d]; d];
        for (i, row) in a.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = flips
                    .iter()
                    .enumerate()
                    .map(|(q, f)| match ((j >> q) & 1, (i >> q) & 1) {
                        (0, 0) => 1.0 - f.p01,
                        (0, _) => f.p01,
                        (_, 0) => f.p10,
                        _ => 1.0 - f.p10,
                    })
                    .product();
            }
        }
        Self { a }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.a.len().trailing_zeros() as usize
    }

    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        self.a.iter().map(|row| row.iter().zip(p).map(|(a, b)| a * b).sum()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mitigated {
    pub probs: Vec<f64>,
    /// Total negative mass removed before renormalising.
    pub clip_mass: f64,
    pub clipped: bool,
}

/// Inverts the assignment matrix on a frequency vector, then clips negative
/// entries and renormalises.
pub fn mitigate_frequencies(freqs: &[f64], a: &AssignmentMatrix) -> Result<Mitigated> {
    if freqs.len() != a.dim() {
        return Err(Error::LengthMismatch { expected: a.dim(), got: freqs.len() });
    }
    let aug: Vec<Vec<f64>> = a
        .a
        .iter()
        .zip(freqs)
        .map(|(row, &f)| {
            let mut r = row.clone();
            r.push(f);
            r
        })
        .collect();
    let raw = gauss_solve(aug)?;
    let clip_mass: f64 = raw.iter().filter(|&&v| v < 0.0).map(|v| -v).sum();
    let mut probs: Vec<f64> = raw.iter().map(|&v| v.max(0.0)).collect();
    let total: f64 = probs.iter().sum();
    if total <= 0.0 {
        return Err(Error::Singular);
    }
    let clipped = clip_mass > 0.0;
    if clipped {
        probs.iter_mut().for_each(|p| *p /= total);
    }
    Ok(Mitigated { probs, clip_mass, clipped })
}

pub fn readout_mitigate(counts: &Counts, a: &AssignmentMatrix) -> Result<Mitigated> {
    if counts.n_qubits() != a.n_qubits() {
        return Err(Error::LengthMismatch { expected: a.n_qubits(), got: counts.n_qubits() });
    }
    mitigate_frequencies(&counts.frequencies(), a)
}

/// Passes each recorded shot through independent per-qubit bit flips.
pub fn apply_readout_error<R: Rng + ?Sized>(counts: &Counts, flips: &[ReadoutError], rng: &mut R) -> Result<Counts> {
    if flips.len() != counts.n_qubits() {
        return Err(Error::LengthMismatch { expected: counts.n_qubits(), got: flips.len() });
    }
    let mut out = Counts::new(counts.n_qubits());
    for (idx, n) in counts.iter() {
        for _ in 0..n {
            let mut read = idx;
            for (q, f) in flips.iter().enumerate() {
                let p = if (idx >> q) & 1 == 0 { f.p01 } else { f.p10 };
                if p > 0.0 && rng.random::<f64>() < p {
                    read ^= 1 << q;
                }
            }
            out.add(read, 1);
        }
    }
    Ok(out)
}
