use num_complex::Complex;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::counts::Counts;
use super::gate::Gate;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Post-selection branches below this probability are rejected.
pub const ZERO_BRANCH: f64 = 1e-12;

/// Dense amplitude vector over `n_qubits` qubits. Qubit 0 is the
/// least-significant bit of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    n_qubits: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Scalar> StateVector<T> {
    /// `|0…0⟩`.
    pub fn new(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1usize << n_qubits];
        amps[index] = Complex::new(T::one(), T::zero());
        Self { n_qubits, amps }
    }

    /// Builds a state from explicit amplitudes, normalising them.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex<T>>) -> Result<Self> {
        if amps.len() != 1usize << n_qubits {
            return Err(Error::LengthMismatch {
                expected: 1usize << n_qubits,
                got: amps.len(),
            });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        if norm <= T::zero() {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        Ok(Self {
            n_qubits,
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Probability that `qubit` reads `bit`.
    pub fn probability_of(&self, qubit: usize, bit: bool) -> T {
        let mask = 1usize << qubit;
        let want = if bit { mask } else { 0 };
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == want)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Probability that each `(qubit, bit)` condition holds simultaneously.
    pub fn probability_of_pattern(&self, conditions: &[(usize, bool)]) -> T {
        let (mask, want) = pattern_mask(conditions);
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == want)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Marginal distribution of the register `qubits` (first qubit = LSB of the result index).
    pub fn marginal(&self, qubits: &[usize]) -> Vec<T> {
        let mut out = vec![T::zero(); 1usize << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let idx = qubits
                .iter()
                .enumerate()
                .fold(0usize, |acc, (k, &q)| acc | (((i >> q) & 1) << k));
            out[idx] += a.norm_sqr();
        }
        out
    }

    pub fn apply(&mut self, gate: &Gate<T>) -> Result<()> {
        gate.validate(self.n_qubits)?;
        apply_gate_raw(&mut self.amps, gate);
        Ok(())
    }

    /// Collapses `qubit` onto `bit`, returning the renormalised state and the
    /// pre-measurement probability of that outcome.
    pub fn post_select(&self, qubit: usize, bit: bool) -> Result<(Self, T)> {
        self.post_select_pattern(&[(qubit, bit)])
    }

    pub fn post_select_pattern(&self, conditions: &[(usize, bool)]) -> Result<(Self, T)> {
        for &(q, _) in conditions {
            if q >= self.n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n_qubits: self.n_qubits,
                });
            }
        }
        let (mask, want) = pattern_mask(conditions);
        let p = self.probability_of_pattern(conditions);
        if p.to_f64_lossy() < ZERO_BRANCH {
            return Err(Error::ZeroProbabilityBranch(p.to_f64_lossy()));
        }
        let scale = T::one() / p.sqrt();
        let zero = Complex::new(T::zero(), T::zero());
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, &a)| if i & mask == want { a * scale } else { zero })
            .collect();
        Ok((
            Self {
                n_qubits: self.n_qubits,
                amps,
            },
            p,
        ))
    }

    /// Multinomial draw of `shots` measurements in the computational basis.
    pub fn sample_counts<R: Rng + ?Sized>(&self, shots: u64, rng: &mut R) -> Result<Counts> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        let probs: Vec<f64> = self.amps.iter().map(|a| a.norm_sqr().to_f64_lossy()).collect();
        let mut counts = Counts::new(self.n_qubits);
        let mut remaining = shots;
        let mut mass_left: f64 = probs.iter().sum();
        for (i, &p) in probs.iter().enumerate() {
            if remaining == 0 {
                break;
            }
            if p <= 0.0 {
                continue;
            }
            let frac = if mass_left > 0.0 { (p / mass_left).min(1.0) } else { 1.0 };
            let n = if frac >= 1.0 {
                remaining
            } else {
                Binomial::new(remaining, frac)
                    .expect("valid binomial")
                    .sample(rng)
            };
            if n > 0 {
                counts.add(i as u64, n);
            }
            remaining -= n;
            mass_left -= p;
        }
        if remaining > 0 {
            // Rounding left mass unassigned; give it to the most likely outcome.
            let best = probs
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .unwrap_or(0);
            counts.add(best as u64, remaining);
        }
        Ok(counts)
    }

    /// Expectation of `Z_{q1} Z_{q2} …` over the exact distribution.
    pub fn parity_expectation(&self, qubits: &[usize]) -> T {
        let mask = qubits.iter().fold(0usize, |m, &q| m | (1 << q));
        self.amps
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if (i & mask).count_ones() % 2 == 0 {
                    a.norm_sqr()
                } else {
                    -a.norm_sqr()
                }
            })
            .sum()
    }

    /// Distance `max_i |a_i - b_i|`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amps
    }
}

pub(crate) fn pattern_mask(conditions: &[(usize, bool)]) -> (usize, usize) {
    conditions.iter().fold((0, 0), |(m, w), &(q, b)| {
        (m | (1 << q), if b { w | (1 << q) } else { w })
    })
}

fn ry_matrix<T: Scalar>(angle: T) -> (T, T) {
    let half = angle / (T::one() + T::one());
    (half.cos(), half.sin())
}

/// Applies a 2×2 real rotation `[[c,-s],[s,c]]` on `target` for indices
/// satisfying the control condition.
fn apply_ry<T: Scalar>(amps: &mut [Complex<T>], target: usize, c: T, s: T, mask: usize, want: usize) {
    let tb = 1usize << target;
    for i in 0..amps.len() {
        if i & tb != 0 || i & mask != want {
            continue;
        }
        let j = i | tb;
        let (a0, a1) = (amps[i], amps[j]);
        amps[i] = a0 * c - a1 * s;
        amps[j] = a0 * s + a1 * c;
    }
}

/// Gate application without validation; used by [`StateVector::apply`] and
/// local-matrix construction.
pub(crate) fn apply_gate_raw<T: Scalar>(amps: &mut [Complex<T>], gate: &Gate<T>) {
    let two = T::one() + T::one();
    match gate {
        Gate::H(q) => {
            let tb = 1usize << q;
            let r = T::FRAC_1_SQRT_2();
            for i in 0..amps.len() {
                if i & tb != 0 {
                    continue;
                }
                let j = i | tb;
                let (a0, a1) = (amps[i], amps[j]);
                amps[i] = (a0 + a1) * r;
                amps[j] = (a0 - a1) * r;
            }
        }
        Gate::X(q) => {
            let tb = 1usize << q;
            for i in 0..amps.len() {
                if i & tb == 0 {
                    amps.swap(i, i | tb);
                }
            }
        }
        Gate::Z(q) => {
            let tb = 1usize << q;
            for (i, a) in amps.iter_mut().enumerate() {
                if i & tb != 0 {
                    *a = -*a;
                }
            }
        }
        Gate::Cz(a, b) => {
            let m = (1usize << a) | (1usize << b);
            for (i, amp) in amps.iter_mut().enumerate() {
                if i & m == m {
                    *amp = -*amp;
                }
            }
        }
        Gate::Ry { target, angle } => {
            let (c, s) = ry_matrix(*angle);
            apply_ry(amps, *target, c, s, 0, 0);
        }
        Gate::Rx { target, angle } => {
            let half = *angle / two;
            let (c, s) = (half.cos(), half.sin());
            let mis = Complex::new(T::zero(), -s);
            let tb = 1usize << target;
            for i in 0..amps.len() {
                if i & tb != 0 {
                    continue;
                }
                let j = i | tb;
                let (a0, a1) = (amps[i], amps[j]);
                amps[i] = a0 * c + a1 * mis;
                amps[j] = a0 * mis + a1 * c;
            }
        }
        Gate::Rz { target, angle } => {
            let half = *angle / two;
            let p0 = Complex::new(half.cos(), -half.sin());
            let p1 = p0.conj();
            let tb = 1usize << target;
            for (i, a) in amps.iter_mut().enumerate() {
                *a = *a * if i & tb == 0 { p0 } else { p1 };
            }
        }
        Gate::Rzz { a, b, angle } => {
            let half = *angle / two;
            let even = Complex::new(half.cos(), -half.sin());
            let odd = even.conj();
            for (i, amp) in amps.iter_mut().enumerate() {
                let parity = ((i >> a) ^ (i >> b)) & 1;
                *amp = *amp * if parity == 0 { even } else { odd };
            }
        }
        Gate::ControlledRy {
            controls,
            pattern,
            target,
            angle,
        } => {
            let conds: Vec<(usize, bool)> =
                controls.iter().copied().zip(pattern.iter().copied()).collect();
            let (mask, want) = pattern_mask(&conds);
            let (c, s) = ry_matrix(*angle);
            apply_ry(amps, *target, c, s, mask, want);
        }
        Gate::UniformlyControlledRy {
            controls,
            target,
            angles,
        } => {
            let cs: Vec<(T, T)> = angles.iter().map(|&a| ry_matrix(a)).collect();
            let tb = 1usize << target;
            for i in 0..amps.len() {
                if i & tb != 0 {
                    continue;
                }
                let idx = controls
                    .iter()
                    .enumerate()
                    .fold(0usize, |acc, (k, &q)| acc | (((i >> q) & 1) << k));
                let (c, s) = cs[idx];
                let j = i | tb;
                let (a0, a1) = (amps[i], amps[j]);
                amps[i] = a0 * c - a1 * s;
                amps[j] = a0 * s + a1 * c;
            }
        }
        Gate::PhaseFlip { qubits, pattern } => {
            let conds: Vec<(usize, bool)> =
                qubits.iter().copied().zip(pattern.iter().copied()).collect();
            let (mask, want) = pattern_mask(&conds);
            for (i, a) in amps.iter_mut().enumerate() {
                if i & mask == want {
                    *a = -*a;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn hadamard_gives_even_split() {
        let mut s = StateVector::<f64>::new(1);
        s.apply(&Gate::H(0)).unwrap();
        let p = s.probabilities();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
        assert!((s.amplitudes()[0].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn ry_loads_rare_probability() {
        let mut s = StateVector::<f64>::new(1);
        s.apply(&Gate::ry(0, 2.0 * 0.171f64.sqrt().asin())).unwrap();
        assert!((s.probability_of(0, true) - 0.171).abs() < 1e-12);
    }

    #[test]
    fn uniformly_controlled_ry_matches_block_diagonal() {
        let (t0, t1) = (0.7f64, 2.1f64);
        let mut s = StateVector::<f64>::new(2);
        s.apply(&Gate::H(0)).unwrap();
        s.apply(&Gate::UniformlyControlledRy {
            controls: vec![0],
            target: 1,
            angles: vec![t0, t1],
        })
        .unwrap();
        // Dense oracle: index = q0 + 2 q1; block over q1 selected by q0.
        let ry = |t: f64| [[(t / 2.0).cos(), -(t / 2.0).sin()], [(t / 2.0).sin(), (t / 2.0).cos()]];
        let mut m = [[0.0f64; 4]; 4];
        for q0 in 0..2 {
            let r = if q0 == 0 { ry(t0) } else { ry(t1) };
            for out1 in 0..2 {
                for in1 in 0..2 {
                    m[q0 + 2 * out1][q0 + 2 * in1] = r[out1][in1];
                }
            }
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let input = [h, h, 0.0, 0.0];
        for row in 0..4 {
            let expect: f64 = (0..4).map(|k| m[row][k] * input[k]).sum();
            assert!((s.amplitudes()[row] - c(expect, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn bell_post_selection() {
        let mut s = StateVector::<f64>::new(2);
        s.apply(&Gate::H(0)).unwrap();
        s.apply(&Gate::H(1)).unwrap();
        s.apply(&Gate::Cz(0, 1)).unwrap();
        s.apply(&Gate::H(1)).unwrap();
        let (post, p) = s.post_select(0, false).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
        assert!((post.amplitudes()[0].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_branch_is_rejected() {
        let mut s = StateVector::<f64>::new(2);
        s.apply(&Gate::H(1)).unwrap();
        assert!(matches!(s.post_select(0, true), Err(Error::ZeroProbabilityBranch(_))));
    }

    #[test]
    fn out_of_range_gate_is_rejected() {
        let mut s = StateVector::<f64>::new(2);
        assert!(matches!(s.apply(&Gate::X(2)), Err(Error::QubitOutOfRange { .. })));
        assert!(matches!(s.apply(&Gate::Cz(0, 0)), Err(Error::DuplicateQubit(0))));
    }

    #[test]
    fn sampling_matches_probabilities() {
        let mut s = StateVector::<f64>::new(1);
        s.apply(&Gate::H(0)).unwrap();
        let counts = s.sample_counts(1_000_000, &mut rng::seeded(1)).unwrap();
        assert!((counts.frequency(1) - 0.5).abs() < 0.002);

        let s = StateVector::<f64>::basis(2, 0b01);
        let counts = s.sample_counts(777, &mut rng::seeded(1)).unwrap();
        assert_eq!(counts.get_bitstring("01"), 777);

        let mut s = StateVector::<f64>::new(1);
        s.apply(&Gate::ry(0, 2.0 * 0.171f64.sqrt().asin())).unwrap();
        let counts = s.sample_counts(8192, &mut rng::seeded(42)).unwrap();
        assert!((counts.frequency(1) - 0.171).abs() < 0.017);

        assert_eq!(s.sample_counts(0, &mut rng::seeded(1)), Err(Error::ZeroShots));
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let mut s = StateVector::<f64>::new(3);
        for q in 0..3 {
            s.apply(&Gate::ry(q, 0.3 + q as f64)).unwrap();
        }
        let a = s.sample_counts(5000, &mut rng::seeded(9)).unwrap();
        let b = s.sample_counts(5000, &mut rng::seeded(9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.total(), 5000);
    }

    #[test]
    fn single_precision_runs() {
        let mut s = StateVector::<f32>::new(2);
        s.apply(&Gate::H(0)).unwrap();
        s.apply(&Gate::rzz(0, 1, 0.4)).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn norm_is_preserved(angles in proptest::collection::vec(-6.3f64..6.3, 12)) {
            let mut s = StateVector::<f64>::new(3);
            for (k, &a) in angles.iter().enumerate() {
                let q = k % 3;
                let g = match k % 6 {
                    0 => Gate::ry(q, a),
                    1 => Gate::rx(q, a),
                    2 => Gate::rz(q, a),
                    3 => Gate::rzz(q, (q + 1) % 3, a),
                    4 => Gate::H(q),
                    _ => Gate::UniformlyControlledRy { controls: vec![(q + 1) % 3], target: q, angles: vec![a, -a] },
                };
                s.apply(&g).unwrap();
                prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
            }
        }
    }
}
