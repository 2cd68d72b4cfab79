use super::gate::Gate;
use super::state::StateVector;
use crate::error::Result;
use crate::scalar::Scalar;

/// Ordered gate list on a fixed register. Gates are validated on insertion.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit<T> {
    n_qubits: usize,
    gates: Vec<Gate<T>>,
}

impl<T: Scalar> Circuit<T> {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate<T>>) -> Result<Self> {
        let mut c = Self::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate<T>] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate<T>) -> Result<&mut Self> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    /// Appends every gate of `other` (which must fit this register).
    pub fn append(&mut self, other: &Circuit<T>) -> Result<&mut Self> {
        for g in &other.gates {
            self.push(g.clone())?;
        }
        Ok(self)
    }

    pub fn inverse(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    pub fn multi_qubit_gate_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_multi_qubit()).count()
    }

    pub fn apply_to(&self, state: &mut StateVector<T>) -> Result<()> {
        for g in &self.gates {
            state.apply(g)?;
        }
        Ok(())
    }

    /// Runs the circuit on `|0…0⟩`.
    pub fn simulate(&self) -> StateVector<T> {
        let mut s = StateVector::new(self.n_qubits);
        for g in &self.gates {
            super::state::apply_gate_raw(s.amps_mut(), g);
        }
        s
    }
}
