use num_complex::Complex;

use crate::error::{Error, Result};
use crate::mtda::IsingInstance;
use crate::scalar::Scalar;
use crate::sim::{Circuit, Gate, StateVector};

/// `|+⟩^n`, then per layer `Rz(2γh_i)`, `Rzz(2γJ_ij)`, `Rx(2β)`.
pub fn build_qaoa_circuit<T: Scalar>(ising: &IsingInstance, angles: &[(f64, f64)]) -> Result<Circuit<T>> {
    if angles.is_empty() {
        return Err(Error::InvalidArgument("QAOA needs at least one layer".into()));
    }
    let n = ising.n();
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.push(Gate::H(q))?;
    }
    for &(gamma, beta) in angles {
        for (q, &h) in ising.h.iter().enumerate() {
            if h != 0.0 {
                c.push(Gate::rz(q, T::c(2.0 * gamma * h)))?;
            }
        }
        for &(a, b, j) in &ising.j {
            if j != 0.0 {
                c.push(Gate::rzz(a, b, T::c(2.0 * gamma * j)))?;
            }
        }
        for q in 0..n {
            c.push(Gate::rx(q, T::c(2.0 * beta)))?;
        }
    }
    Ok(c)
}

/// Same state as [`build_qaoa_circuit`] with the cost layer applied as
/// diagonal phases `e^{-iγ(E(z) − offset)}`.
pub fn qaoa_state<T: Scalar>(ising: &IsingInstance, diagonal: &[f64], angles: &[(f64, f64)]) -> Result<StateVector<T>> {
    let n = ising.n();
    if diagonal.len() != 1usize << n {
        return Err(Error::LengthMismatch { expected: 1 << n, got: diagonal.len() });
    }
    let amp = T::one() / T::from_usize_lossy(1usize << n).sqrt();
    let mut sv = StateVector::from_amplitudes(n, vec![Complex::new(amp, T::zero()); 1usize << n])?;
    for &(gamma, beta) in angles {
        for (a, &e) in sv.amps_mut().iter_mut().zip(diagonal) {
            let phase = -gamma * (e - ising.offset);
            *a = *a * Complex::new(T::c(phase.cos()), T::c(phase.sin()));
        }
        for q in 0..n {
            sv.apply(&Gate::rx(q, T::c(2.0 * beta)))?;
        }
    }
    Ok(sv)
}

/// `Σ_z P(z) E(z)`.
pub fn expectation_from_state<T: Scalar>(state: &StateVector<T>, diagonal: &[f64]) -> f64 {
    state
        .amplitudes()
        .iter()
        .zip(diagonal)
        .map(|(a, &e)| a.norm_sqr().to_f64_lossy() * e)
        .sum()
}

/// Exact `⟨H_C⟩` for the given angles.
pub fn expectation(ising: &IsingInstance, angles: &[(f64, f64)]) -> Result<f64> {
    let diag = ising.diagonal();
    let sv = qaoa_state::<f64>(ising, &diag, angles)?;
    Ok(expectation_from_state(&sv, &diag))
}
