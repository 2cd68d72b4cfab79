use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::circuit::Circuit;
use super::counts::Counts;
use super::gate::Gate;
use super::state::{apply_gate_raw, StateVector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Stochastic depolarising noise: after each gate, every touched qubit
/// independently receives a uniformly random X, Y or Z with the gate-class
/// probability.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p1q: f64,
    pub p2q: f64,
}

impl NoiseModel {
    pub fn new(p1q: f64, p2q: f64) -> Result<Self> {
        for p in [p1q, p2q] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!(
                    "depolarising probability {p} outside [0,1]"
                )));
            }
        }
        Ok(Self { p1q, p2q })
    }

    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn two_qubit(p2q: f64) -> Result<Self> {
        Self::new(0.0, p2q)
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1q == 0.0 && self.p2q == 0.0
    }

    pub fn rate_for<T: Scalar>(&self, gate: &Gate<T>) -> f64 {
        if gate.is_multi_qubit() {
            self.p2q
        } else {
            self.p1q
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Pauli {
    X,
    Y,
    Z,
}

fn apply_pauli<T: Scalar>(amps: &mut [Complex<T>], qubit: usize, p: Pauli) {
    let tb = 1usize << qubit;
    match p {
        Pauli::X => apply_gate_raw(amps, &Gate::X(qubit)),
        Pauli::Z => apply_gate_raw(amps, &Gate::Z(qubit)),
        Pauli::Y => {
            // Y = i X Z
            let i = Complex::new(T::zero(), T::one());
            for k in 0..amps.len() {
                if k & tb == 0 {
                    let j = k | tb;
                    let (a0, a1) = (amps[k], amps[j]);
                    amps[k] = -i * a1;
                    amps[j] = i * a0;
                }
            }
        }
    }
}

fn sample_index<R: Rng + ?Sized>(cdf: &[f64], rng: &mut R) -> u64 {
    let total = *cdf.last().unwrap_or(&1.0);
    let u: f64 = rng.random::<f64>() * total;
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1) as u64
}

fn cdf_of<T: Scalar>(state: &StateVector<T>) -> Vec<f64> {
    let mut acc = 0.0;
    state
        .amplitudes()
        .iter()
        .map(|a| {
            acc += a.norm_sqr().to_f64_lossy();
            acc
        })
        .collect()
}

/// Monte-Carlo trajectory execution. With a noiseless model this is exactly
/// `circuit.simulate().sample_counts(shots, rng)`.
pub fn run_noisy<T: Scalar, R: Rng + ?Sized>(
    circuit: &Circuit<T>,
    noise: &NoiseModel,
    shots: u64,
    rng: &mut R,
) -> Result<Counts> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let ideal = circuit.simulate();
    if noise.is_noiseless() {
        return ideal.sample_counts(shots, rng);
    }
    let ideal_cdf = cdf_of(&ideal);
    let rates: Vec<f64> = circuit.gates().iter().map(|g| noise.rate_for(g)).collect();
    let mut counts = Counts::new(circuit.n_qubits());
    let mut errors: Vec<(usize, usize, Pauli)> = Vec::new();
    for _ in 0..shots {
        errors.clear();
        for (gi, gate) in circuit.gates().iter().enumerate() {
            let p = rates[gi];
            if p <= 0.0 {
                continue;
            }
            for q in gate.qubits() {
                if rng.random::<f64>() < p {
                    let pauli = match rng.random_range(0..3u8) {
                        0 => Pauli::X,
                        1 => Pauli::Y,
                        _ => Pauli::Z,
                    };
                    errors.push((gi, q, pauli));
                }
            }
        }
        let outcome = if errors.is_empty() {
            sample_index(&ideal_cdf, rng)
        } else {
            let mut state = StateVector::<T>::new(circuit.n_qubits());
            let mut next = 0;
            for (gi, gate) in circuit.gates().iter().enumerate() {
                apply_gate_raw(state.amps_mut(), gate);
                while next < errors.len() && errors[next].0 == gi {
                    apply_pauli(state.amps_mut(), errors[next].1, errors[next].2);
                    next += 1;
                }
            }
            sample_index(&cdf_of(&state), rng)
        };
        counts.add(outcome, 1);
    }
    Ok(counts)
}
