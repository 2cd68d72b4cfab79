use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pomdp::Belief;
use crate::scalar::Scalar;
use crate::sim::{Circuit, Gate, StateVector};

use super::circuits::EncodedBelief;

/// `sin²((2k+1)·arcsin√a)`.
pub fn amplified_probability(a: f64, k: usize) -> f64 {
    let theta = a.clamp(0.0, 1.0).sqrt().asin();
    ((2 * k + 1) as f64 * theta).sin().powi(2)
}

/// How the iteration count is chosen from the evidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IterationRule {
    /// `⌊π/(4·arcsin√p) − ½⌋`.
    #[default]
    Standard,
    /// `⌊(π/4)·√(1/p)⌋`.
    SquareRoot,
}

// Exact integers such as P(e)=1/4 must not round down.
const FLOOR_SLACK: f64 = 1e-9;

pub fn optimal_iterations(evidence: f64) -> Result<usize> {
    optimal_iterations_with(evidence, IterationRule::Standard)
}

pub fn optimal_iterations_with(evidence: f64, rule: IterationRule) -> Result<usize> {
    if !(evidence > 0.0 && evidence < 1.0) {
        return Err(Error::InvalidArgument(format!("evidence {evidence} outside (0,1)")));
    }
    let k = match rule {
        IterationRule::Standard => (std::f64::consts::PI / (4.0 * evidence.sqrt().asin()) - 0.5 + FLOOR_SLACK).floor(),
        IterationRule::SquareRoot => (std::f64::consts::FRAC_PI_4 * (1.0 / evidence).sqrt() + FLOOR_SLACK).floor(),
    };
    Ok(k.max(0.0) as usize)
}

/// Preparation circuit `A` and the marked outcome of the oracle `S_e`.
#[derive(Debug, Clone)]
pub struct GroverSetup<T> {
    prep: Circuit<T>,
    marked: Vec<(usize, bool)>,
}

impl<T: Scalar> GroverSetup<T> {
    pub fn new(prep: Circuit<T>, marked: Vec<(usize, bool)>) -> Result<Self> {
        if marked.is_empty() {
            return Err(Error::InvalidArgument("empty marked pattern".into()));
        }
        Gate::<T>::PhaseFlip {
            qubits: marked.iter().map(|m| m.0).collect(),
            pattern: marked.iter().map(|m| m.1).collect(),
        }
        .validate(prep.n_qubits())?;
        Ok(Self { prep, marked })
    }

    /// Oracle marking observation `o` of an encoded belief.
    pub fn for_observation(enc: &EncodedBelief<T>, o: usize) -> Result<Self> {
        Self::new(enc.circuit.clone(), enc.observation_pattern(o))
    }

    pub fn preparation(&self) -> &Circuit<T> {
        &self.prep
    }

    pub fn marked(&self) -> &[(usize, bool)] {
        &self.marked
    }

    /// `S_e`: phase flip on the marked outcome.
    pub fn oracle(&self) -> Gate<T> {
        Gate::PhaseFlip {
            qubits: self.marked.iter().map(|m| m.0).collect(),
            pattern: self.marked.iter().map(|m| m.1).collect(),
        }
    }

    /// `S_0 = I − 2|0…0⟩⟨0…0|` (up to global phase).
    pub fn zero_reflection(&self) -> Gate<T> {
        let n = self.prep.n_qubits();
        Gate::PhaseFlip { qubits: (0..n).collect(), pattern: vec![false; n] }
    }

    /// One Grover iterate `G = A S_0 A† S_e`.
    pub fn iterate(&self) -> Circuit<T> {
        let mut c = Circuit::new(self.prep.n_qubits());
        c.push(self.oracle()).expect("validated oracle");
        c.append(&self.prep.inverse()).expect("same width");
        c.push(self.zero_reflection()).expect("full-width reflection");
        c.append(&self.prep).expect("same width");
        c
    }

    /// `G^k A`.
    pub fn circuit(&self, k: usize) -> Circuit<T> {
        let mut c = self.prep.clone();
        let g = self.iterate();
        for _ in 0..k {
            c.append(&g).expect("same width");
        }
        c
    }

    pub fn amplify(&self, k: usize) -> StateVector<T> {
        let mut sv = self.prep.simulate();
        let g = self.iterate();
        for _ in 0..k {
            g.apply_to(&mut sv).expect("validated circuit");
        }
        sv
    }

    pub fn success_probability(&self, state: &StateVector<T>) -> T {
        state.probability_of_pattern(&self.marked)
    }

    /// Marked probability of the unamplified state.
    pub fn base_probability(&self) -> T {
        self.success_probability(&self.prep.simulate())
    }
}

/// Amplifies observation `o` of `enc` with `k` iterates and post-selects.
/// Returns the posterior and the amplified branch probability.
pub fn amplified_posterior<T: Scalar>(enc: &EncodedBelief<T>, o: usize, k: usize) -> Result<(Belief<T>, T)> {
    let setup = GroverSetup::for_observation(enc, o)?;
    let sv = setup.amplify(k);
    enc.posterior_from(&sv, o)
}
