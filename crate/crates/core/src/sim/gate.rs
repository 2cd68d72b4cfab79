use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A gate together with the qubits it acts on.
///
/// Control lists are ordered: for [`Gate::UniformlyControlledRy`] the first
/// control is the least-significant bit of the angle index.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate<T> {
    H(usize),
    X(usize),
    Z(usize),
    Cz(usize, usize),
    Ry { target: usize, angle: T },
    Rx { target: usize, angle: T },
    Rz { target: usize, angle: T },
    /// `exp(-i angle/2 Z⊗Z)`.
    Rzz { a: usize, b: usize, angle: T },
    /// Ry on `target` applied only when every control matches `pattern`.
    ControlledRy {
        controls: Vec<usize>,
        pattern: Vec<bool>,
        target: usize,
        angle: T,
    },
    /// Block-diagonal Ry: control value `c` selects `angles[c]`.
    UniformlyControlledRy {
        controls: Vec<usize>,
        target: usize,
        angles: Vec<T>,
    },
    /// Multiplies by -1 every basis state whose `qubits` read `pattern`.
    PhaseFlip { qubits: Vec<usize>, pattern: Vec<bool> },
}

impl<T: Scalar> Gate<T> {
    pub fn ry(target: usize, angle: T) -> Self {
        Gate::Ry { target, angle }
    }

    pub fn rx(target: usize, angle: T) -> Self {
        Gate::Rx { target, angle }
    }

    pub fn rz(target: usize, angle: T) -> Self {
        Gate::Rz { target, angle }
    }

    pub fn rzz(a: usize, b: usize, angle: T) -> Self {
        Gate::Rzz { a, b, angle }
    }

    /// Every qubit the gate touches, targets first.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) => vec![*q],
            Gate::Ry { target, .. } | Gate::Rx { target, .. } | Gate::Rz { target, .. } => {
                vec![*target]
            }
            Gate::Cz(a, b) | Gate::Rzz { a, b, .. } => vec![*a, *b],
            Gate::ControlledRy {
                controls, target, ..
            }
            | Gate::UniformlyControlledRy {
                controls, target, ..
            } => std::iter::once(*target)
                .chain(controls.iter().copied())
                .collect(),
            Gate::PhaseFlip { qubits, .. } => qubits.clone(),
        }
    }

    pub fn arity(&self) -> usize {
        self.qubits().len()
    }

    pub fn is_multi_qubit(&self) -> bool {
        self.arity() > 1
    }

    /// Checks indices against an `n_qubits` register and the structural
    /// constraints of the variant.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let qubits = self.qubits();
        for (k, &q) in qubits.iter().enumerate() {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
            if qubits[..k].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        match self {
            Gate::ControlledRy {
                controls, pattern, ..
            } if controls.len() != pattern.len() => Err(Error::InvalidGate(format!(
                "{} controls but pattern of length {}",
                controls.len(),
                pattern.len()
            ))),
            Gate::UniformlyControlledRy {
                controls, angles, ..
            } if angles.len() != 1usize << controls.len() => {
                Err(Error::InvalidGate(format!(
                    "uniformly controlled Ry over {} controls needs {} angles, got {}",
                    controls.len(),
                    1usize << controls.len(),
                    angles.len()
                )))
            }
            Gate::PhaseFlip { qubits, pattern } if qubits.len() != pattern.len() || qubits.is_empty() => {
                Err(Error::InvalidGate("phase flip pattern mismatch".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Gate::Ry { target, angle } => Gate::Ry {
                target: *target,
                angle: -*angle,
            },
            Gate::Rx { target, angle } => Gate::Rx {
                target: *target,
                angle: -*angle,
            },
            Gate::Rz { target, angle } => Gate::Rz {
                target: *target,
                angle: -*angle,
            },
            Gate::Rzz { a, b, angle } => Gate::Rzz {
                a: *a,
                b: *b,
                angle: -*angle,
            },
            Gate::ControlledRy {
                controls,
                pattern,
                target,
                angle,
            } => Gate::ControlledRy {
                controls: controls.clone(),
                pattern: pattern.clone(),
                target: *target,
                angle: -*angle,
            },
            Gate::UniformlyControlledRy {
                controls,
                target,
                angles,
            } => Gate::UniformlyControlledRy {
                controls: controls.clone(),
                target: *target,
                angles: angles.iter().map(|a| -*a).collect(),
            },
            // Hermitian gates.
            g => g.clone(),
        }
    }

    /// Dense unitary on the gate's own qubits, in the order of [`Gate::qubits`]
    /// (first listed qubit is the least-significant local index bit).
    pub fn local_matrix(&self) -> Vec<Complex<T>> {
        let qubits = self.qubits();
        let k = qubits.len();
        let dim = 1usize << k;
        let local = self.relabel(&qubits);
        let mut out = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        for col in 0..dim {
            let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
            amps[col] = Complex::new(T::one(), T::zero());
            super::state::apply_gate_raw(&mut amps, &local);
            for row in 0..dim {
                out[row * dim + col] = amps[row];
            }
        }
        out
    }

    /// Maps each qubit `qubits[i]` to index `i`.
    fn relabel(&self, qubits: &[usize]) -> Self {
        let map = |q: usize| qubits.iter().position(|&x| x == q).expect("qubit in list");
        let map_all = |v: &[usize]| v.iter().map(|&q| map(q)).collect::<Vec<_>>();
        match self {
            Gate::H(q) => Gate::H(map(*q)),
            Gate::X(q) => Gate::X(map(*q)),
            Gate::Z(q) => Gate::Z(map(*q)),
            Gate::Cz(a, b) => Gate::Cz(map(*a), map(*b)),
            Gate::Ry { target, angle } => Gate::Ry {
                target: map(*target),
                angle: *angle,
            },
            Gate::Rx { target, angle } => Gate::Rx {
                target: map(*target),
                angle: *angle,
            },
            Gate::Rz { target, angle } => Gate::Rz {
                target: map(*target),
                angle: *angle,
            },
            Gate::Rzz { a, b, angle } => Gate::Rzz {
                a: map(*a),
                b: map(*b),
                angle: *angle,
            },
            Gate::ControlledRy {
                controls,
                pattern,
                target,
                angle,
            } => Gate::ControlledRy {
                controls: map_all(controls),
                pattern: pattern.clone(),
                target: map(*target),
                angle: *angle,
            },
            Gate::UniformlyControlledRy {
                controls,
                target,
                angles,
            } => Gate::UniformlyControlledRy {
                controls: map_all(controls),
                target: map(*target),
                angles: angles.clone(),
            },
            Gate::PhaseFlip { qubits: q, pattern } => Gate::PhaseFlip {
                qubits: map_all(q),
                pattern: pattern.clone(),
            },
        }
    }
}
