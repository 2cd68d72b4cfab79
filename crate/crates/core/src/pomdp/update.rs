use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::model::{Belief, PomdpModel};

/// Below this evidence an observation is treated as impossible.
pub const MIN_EVIDENCE: f64 = 1e-12;

/// Predicted next-state distribution `Σ_s T(s'|s,a) b(s)`.
pub fn predict<T: Scalar>(model: &PomdpModel<T>, b: &Belief<T>, a: usize) -> Vec<T> {
    let n = model.n_states();
    let mut out = vec![T::zero(); n];
    for (s, &bs) in b.probs().iter().enumerate() {
        if bs == T::zero() {
            continue;
        }
        for (o, &t) in out.iter_mut().zip(model.transition_row(a, s)) {
            *o += t * bs;
        }
    }
    out
}

/// Unnormalised posterior `O(o|s',a) Σ_s T(s'|s,a) b(s)`.
pub fn joint<T: Scalar>(model: &PomdpModel<T>, b: &Belief<T>, a: usize, o: usize) -> Vec<T> {
    predict(model, b, a)
        .into_iter()
        .enumerate()
        .map(|(s2, p)| p * model.observation(a, s2, o))
        .collect()
}

/// `P(o | b, a)`.
pub fn evidence_probability<T: Scalar>(model: &PomdpModel<T>, b: &Belief<T>, a: usize, o: usize) -> T {
    joint(model, b, a, o).into_iter().sum()
}

/// Exact Bayes filter step. Returns the posterior and the evidence `P(o|b,a)`.
pub fn belief_update<T: Scalar>(model: &PomdpModel<T>, b: &Belief<T>, a: usize, o: usize) -> Result<(Belief<T>, T)> {
    if b.len() != model.n_states() {
        return Err(Error::LengthMismatch { expected: model.n_states(), got: b.len() });
    }
    if a >= model.n_actions() || o >= model.n_obs() {
        return Err(Error::InvalidArgument(format!("action {a} or observation {o} out of range")));
    }
    let j = joint(model, b, a, o);
    let evidence: T = j.iter().copied().sum();
    if evidence.to_f64_lossy() < MIN_EVIDENCE {
        return Err(Error::ImpossibleObservation(evidence.to_f64_lossy()));
    }
    let post = j.into_iter().map(|p| p / evidence).collect();
    Ok((Belief::from_weights(post)?, evidence))
}

fn same_len<T>(p: &[T], q: &[T]) -> Result<()> {
    if p.len() == q.len() {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected: p.len(), got: q.len() })
    }
}

/// Hellinger distance `(1/√2) ‖√p − √q‖₂`.
pub fn hellinger<T: Scalar>(p: &[T], q: &[T]) -> Result<T> {
    same_len(p, q)?;
    let s: T = p.iter().zip(q).map(|(&a, &b)| (a.sqrt() - b.sqrt()).powi(2)).sum();
    Ok((s / T::c(2.0)).sqrt().min(T::one()))
}

/// `KL(p ‖ q) = Σ p ln(p/q)`.
pub fn kl_divergence<T: Scalar>(p: &[T], q: &[T]) -> Result<T> {
    same_len(p, q)?;
    let mut acc = T::zero();
    for (i, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        if pi > T::zero() {
            if qi <= T::zero() {
                return Err(Error::AbsoluteContinuity(i));
            }
            acc += pi * (pi / qi).ln();
        }
    }
    Ok(acc.max(T::zero()))
}
