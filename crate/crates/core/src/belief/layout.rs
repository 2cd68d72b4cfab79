use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::pomdp::PomdpModel;

/// Register sizes of the full belief-update circuit.
///
/// Only `state`, `action`, `next_state`, `observation` and `precision` are
/// simulated; the computation ancillae and the Grover flag are counted for
/// resource accounting but the simulator applies multi-controlled gates natively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeliefCircuitLayout {
    pub state: usize,
    pub next_state: usize,
    pub observation: usize,
    pub precision: usize,
    pub action: usize,
    pub ancilla: usize,
    pub flag: usize,
}

pub fn qubits_for(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

impl BeliefCircuitLayout {
    pub fn for_sizes(n_states: usize, n_actions: usize, n_obs: usize) -> Self {
        let state = qubits_for(n_states).max(1);
        // Precision and ancilla budgets grow with the state register: small,
        // medium (up to 16 states) and large problems.
        let (precision, ancilla) = match state {
            0..=1 => (4, 3),
            2..=4 => (6, 6),
            _ => (8, 10),
        };
        Self {
            state,
            next_state: state,
            observation: qubits_for(n_obs).max(1),
            precision,
            action: qubits_for(n_actions).max(1),
            ancilla,
            flag: 1,
        }
    }

    pub fn for_model<T: Scalar>(model: &PomdpModel<T>) -> Self {
        Self::for_sizes(model.n_states(), model.n_actions(), model.n_obs())
    }

    pub fn total(&self) -> usize {
        self.state + self.next_state + self.observation + self.precision + self.action + self.ancilla + self.flag
    }

    /// Qubits actually allocated in simulation.
    pub fn simulated(&self) -> usize {
        self.state + self.action + self.next_state + self.observation + self.precision
    }

    /// Qubit indices of each simulated register, in order s, a, s', o, r.
    pub fn registers(&self) -> Registers {
        let mut next = 0;
        let mut take = |n: usize| {
            let r: Vec<usize> = (next..next + n).collect();
            next += n;
            r
        };
        let state = take(self.state);
        let action = take(self.action);
        let next_state = take(self.next_state);
        let observation = take(self.observation);
        let reward = take(self.precision);
        Registers { state, action, next_state, observation, reward }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Registers {
    pub state: Vec<usize>,
    pub action: Vec<usize>,
    pub next_state: Vec<usize>,
    pub observation: Vec<usize>,
    pub reward: Vec<usize>,
}
