use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Shot histogram keyed by basis index (qubit 0 = least-significant bit).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    n_qubits: usize,
    map: BTreeMap<u64, u64>,
}

impl Counts {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            map: BTreeMap::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn add(&mut self, index: u64, n: u64) {
        *self.map.entry(index).or_insert(0) += n;
    }

    pub fn get(&self, index: u64) -> u64 {
        self.map.get(&index).copied().unwrap_or(0)
    }

    /// Count for a bitstring written most-significant qubit first.
    pub fn get_bitstring(&self, bits: &str) -> u64 {
        u64::from_str_radix(bits, 2).map(|i| self.get(i)).unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.map.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn frequency(&self, index: u64) -> f64 {
        let t = self.total();
        if t == 0 {
            0.0
        } else {
            self.get(index) as f64 / t as f64
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.map.iter().map(|(&k, &v)| (k, v))
    }

    /// Renders `index` most-significant qubit first.
    pub fn bitstring(&self, index: u64) -> String {
        format_bits(index, self.n_qubits)
    }

    /// Dense frequency vector of length `2^n`.
    pub fn frequencies(&self) -> Vec<f64> {
        let t = self.total().max(1) as f64;
        let mut out = vec![0.0; 1usize << self.n_qubits];
        for (&k, &v) in &self.map {
            out[k as usize] = v as f64 / t;
        }
        out
    }

    /// Empirical `⟨Z…Z⟩` over the listed qubits.
    pub fn parity_expectation(&self, qubits: &[usize]) -> f64 {
        let mask = qubits.iter().fold(0u64, |m, &q| m | (1 << q));
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        let signed: i64 = self
            .map
            .iter()
            .map(|(&k, &v)| {
                if (k & mask).count_ones() % 2 == 0 {
                    v as i64
                } else {
                    -(v as i64)
                }
            })
            .sum();
        signed as f64 / total as f64
    }

    /// Outcomes sorted by descending count, ties by ascending index.
    pub fn most_frequent(&self, k: usize) -> Vec<(u64, u64)> {
        let mut v: Vec<(u64, u64)> = self.iter().collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        v.truncate(k);
        v
    }
}

pub fn format_bits(index: u64, n_qubits: usize) -> String {
    (0..n_qubits)
        .rev()
        .map(|q| if (index >> q) & 1 == 1 { '1' } else { '0' })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitstrings_render_msb_first() {
        let mut c = Counts::new(3);
        c.add(0b001, 5);
        assert_eq!(c.bitstring(0b001), "001");
        assert_eq!(c.get_bitstring("001"), 5);
        assert_eq!(format_bits(0b110, 3), "110");
    }

    #[test]
    fn parity_and_ranking() {
        let mut c = Counts::new(2);
        c.add(0b00, 6);
        c.add(0b11, 2);
        c.add(0b01, 2);
        assert!((c.parity_expectation(&[0, 1]) - 0.6).abs() < 1e-12);
        assert_eq!(c.most_frequent(2), vec![(0, 6), (1, 2)]);
    }
}
