use crate::error::{Error, Result};
use crate::pomdp::{Belief, PomdpModel};
use crate::scalar::Scalar;
use crate::sim::{Circuit, Counts, Gate, StateVector};

use super::layout::{qubits_for, BeliefCircuitLayout, Registers};

/// Largest register the builders will allocate.
pub const MAX_SIMULATED_QUBITS: usize = 24;

/// `Ry(θ)|0⟩ = √(1-p)|0⟩ + √p|1⟩`.
pub fn ry_angle_for<T: Scalar>(p_one: T) -> T {
    let p = p_one.max(T::zero()).min(T::one());
    T::c(2.0) * p.sqrt().asin()
}

/// Gates writing `√dists[c][x]` onto `target` (first qubit = LSB of `x`)
/// conditioned on the value `c` of `controls` (first control = LSB of `c`).
/// The target register must start in `|0…0⟩`.
pub fn load_distribution<T: Scalar>(target: &[usize], controls: &[usize], dists: &[Vec<T>]) -> Result<Vec<Gate<T>>> {
    let n = target.len();
    let nc = controls.len();
    if dists.len() != 1usize << nc {
        return Err(Error::LengthMismatch { expected: 1 << nc, got: dists.len() });
    }
    if let Some(d) = dists.iter().find(|d| d.len() != 1usize << n) {
        return Err(Error::LengthMismatch { expected: 1 << n, got: d.len() });
    }
    let mut gates = Vec::with_capacity(n);
    // Most significant target bit first; each later bit is conditioned on
    // the bits already written.
    for k in (0..n).rev() {
        let hi_bits = n - 1 - k;
        let mut ctrl: Vec<usize> = controls.to_vec();
        ctrl.extend_from_slice(&target[k + 1..]);
        let mut angles = Vec::with_capacity(1usize << (nc + hi_bits));
        for hi in 0..1usize << hi_bits {
            for dist in dists {
                let mut left = T::zero();
                let mut right = T::zero();
                let base = hi << (k + 1);
                for low in 0..1usize << k {
                    left += dist[base | low];
                    right += dist[base | (1 << k) | low];
                }
                let total = left + right;
                angles.push(if total > T::zero() { ry_angle_for(right / total) } else { T::zero() });
            }
        }
        // Angle index is c | hi << nc, matching the control order above.
        gates.push(if ctrl.is_empty() {
            Gate::Ry { target: target[k], angle: angles[0] }
        } else {
            Gate::UniformlyControlledRy { controls: ctrl, target: target[k], angles }
        });
    }
    Ok(gates)
}

fn bits_of(value: usize, width: usize) -> Vec<bool> {
    (0..width).map(|i| (value >> i) & 1 == 1).collect()
}

fn padded<T: Scalar>(row: &[T], width: usize) -> Vec<T> {
    let mut v = vec![T::zero(); width];
    v[..row.len()].copy_from_slice(row);
    v
}

fn delta<T: Scalar>(width: usize) -> Vec<T> {
    let mut v = vec![T::zero(); width];
    v[0] = T::one();
    v
}

/// A prepared belief-update circuit and where to read its registers.
#[derive(Debug, Clone)]
pub struct EncodedBelief<T> {
    pub circuit: Circuit<T>,
    /// Register holding the successor state the posterior is read from.
    pub posterior_qubits: Vec<usize>,
    pub obs_qubits: Vec<usize>,
    pub n_states: usize,
    pub n_obs: usize,
}

impl<T: Scalar> EncodedBelief<T> {
    pub fn observation_pattern(&self, o: usize) -> Vec<(usize, bool)> {
        self.obs_qubits.iter().copied().zip(bits_of(o, self.obs_qubits.len())).collect()
    }

    /// Post-selects `state` on observation `o` and returns the posterior over
    /// the first `n_states` basis values of the successor register together
    /// with the branch probability.
    pub fn posterior_from(&self, state: &StateVector<T>, o: usize) -> Result<(Belief<T>, T)> {
        if o >= self.n_obs {
            return Err(Error::InvalidArgument(format!("observation {o} out of range")));
        }
        let (collapsed, p) = state.post_select_pattern(&self.observation_pattern(o))?;
        let marg = collapsed.marginal(&self.posterior_qubits);
        let padding: T = marg[self.n_states..].iter().copied().sum();
        if padding.to_f64_lossy() > 1e-9 {
            return Err(Error::InvalidModel(format!("padding states carry mass {padding}")));
        }
        Ok((Belief::from_weights(marg[..self.n_states].to_vec())?, p))
    }

    /// Posterior estimated from shots that landed on observation `o`.
    pub fn posterior_from_counts(&self, counts: &Counts, o: usize) -> Result<Belief<T>> {
        if o >= self.n_obs {
            return Err(Error::InvalidArgument(format!("observation {o} out of range")));
        }
        let pattern = self.observation_pattern(o);
        let mut hist = vec![T::zero(); self.n_states];
        let mut hits = 0u64;
        for (idx, n) in counts.iter() {
            let idx = idx as usize;
            if pattern.iter().all(|&(q, bit)| ((idx >> q) & 1 == 1) == bit) {
                let s = self.posterior_qubits.iter().enumerate().fold(0, |acc, (i, &q)| acc | ((idx >> q) & 1) << i);
                if s < self.n_states {
                    hist[s] += T::c(n as f64);
                    hits += n;
                }
            }
        }
        if hits == 0 {
            return Err(Error::ZeroProbabilityBranch(0.0));
        }
        Belief::from_weights(hist)
    }

    /// Noiseless post-selection on the prepared state.
    pub fn posterior(&self, o: usize) -> Result<(Belief<T>, T)> {
        self.posterior_from(&self.circuit.simulate(), o)
    }

    /// Probability of observing `o` in the prepared state.
    pub fn evidence(&self) -> Vec<T> {
        let sv = self.circuit.simulate();
        let marg = sv.marginal(&self.obs_qubits);
        marg[..self.n_obs].to_vec()
    }
}

/// Full register encoding `Σ √(b(s)T(s'|s,a)O(o|s',a)) |s,a,s',o,r(s,a)⟩`.
#[derive(Debug, Clone)]
pub struct FullBeliefCircuit<T> {
    pub encoded: EncodedBelief<T>,
    pub layout: BeliefCircuitLayout,
    pub registers: Registers,
}

/// Reward discretised onto `bits` levels spanning the model's reward range.
pub fn reward_code<T: Scalar>(model: &PomdpModel<T>, s: usize, a: usize, bits: usize) -> usize {
    let (lo, hi) = reward_range(model);
    if hi <= lo || bits == 0 {
        return 0;
    }
    let levels = ((1usize << bits) - 1) as f64;
    let x = (model.reward(s, a).to_f64_lossy() - lo) / (hi - lo);
    (x * levels).round() as usize
}

/// Inverse of [`reward_code`] up to quantisation.
pub fn decode_reward<T: Scalar>(model: &PomdpModel<T>, code: usize, bits: usize) -> f64 {
    let (lo, hi) = reward_range(model);
    if hi <= lo || bits == 0 {
        return lo;
    }
    lo + (hi - lo) * code as f64 / ((1usize << bits) - 1) as f64
}

fn reward_range<T: Scalar>(model: &PomdpModel<T>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in 0..model.n_states() {
        for a in 0..model.n_actions() {
            let r = model.reward(s, a).to_f64_lossy();
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    (lo, hi)
}

/// Builds the full belief-update circuit for action `a`.
///
/// Non-power-of-two state or observation spaces need `allow_padding`; padded
/// values get zero amplitude. Unused action codes are always padded.
pub fn build_full_belief_circuit<T: Scalar>(
    model: &PomdpModel<T>,
    b: &Belief<T>,
    a: usize,
    allow_padding: bool,
) -> Result<FullBeliefCircuit<T>> {
    let (ns, na, no) = (model.n_states(), model.n_actions(), model.n_obs());
    if b.len() != ns {
        return Err(Error::LengthMismatch { expected: ns, got: b.len() });
    }
    if a >= na {
        return Err(Error::InvalidArgument(format!("action {a} out of range")));
    }
    if !allow_padding && (!ns.is_power_of_two() || !no.is_power_of_two()) {
        return Err(Error::InvalidArgument(format!(
            "|S|={ns}, |Ω|={no} are not powers of two; enable padding"
        )));
    }
    let layout = BeliefCircuitLayout::for_model(model);
    let n = layout.simulated();
    if n > MAX_SIMULATED_QUBITS {
        return Err(Error::TooLarge { n, cap: MAX_SIMULATED_QUBITS });
    }
    let regs = layout.registers();
    let (ws, wo) = (1usize << layout.state, 1usize << layout.observation);
    let mut c = Circuit::new(n);

    for g in load_distribution(&regs.state, &[], &[padded(b.probs(), ws)])? {
        c.push(g)?;
    }
    for (q, bit) in regs.action.iter().zip(bits_of(a, layout.action)) {
        if bit {
            c.push(Gate::X(*q))?;
        }
    }

    let n_act_codes = 1usize << layout.action;
    let mut sa_controls = regs.state.clone();
    sa_controls.extend_from_slice(&regs.action);

    // U1: transition onto s'.
    let mut rows = Vec::with_capacity(ws * n_act_codes);
    for aa in 0..n_act_codes {
        for s in 0..ws {
            rows.push(if s < ns && aa < na { padded(model.transition_row(aa, s), ws) } else { delta(ws) });
        }
    }
    for g in load_distribution(&regs.next_state, &sa_controls, &rows)? {
        c.push(g)?;
    }

    // U2: observation onto o, conditioned on s'.
    let mut s2a_controls = regs.next_state.clone();
    s2a_controls.extend_from_slice(&regs.action);
    let mut rows = Vec::with_capacity(ws * n_act_codes);
    for aa in 0..n_act_codes {
        for s2 in 0..ws {
            rows.push(if s2 < ns && aa < na { padded(model.observation_row(aa, s2), wo) } else { delta(wo) });
        }
    }
    for g in load_distribution(&regs.observation, &s2a_controls, &rows)? {
        c.push(g)?;
    }

    // U3: basis tag of the discretised reward.
    for (bit, &q) in regs.reward.iter().enumerate() {
        let mut angles = Vec::with_capacity(ws * n_act_codes);
        for aa in 0..n_act_codes {
            for s in 0..ws {
                let set = s < ns && aa < na && (reward_code(model, s, aa, layout.precision) >> bit) & 1 == 1;
                angles.push(if set { T::PI() } else { T::zero() });
            }
        }
        if angles.iter().any(|&x| x != T::zero()) {
            c.push(Gate::UniformlyControlledRy { controls: sa_controls.clone(), target: q, angles })?;
        }
    }

    Ok(FullBeliefCircuit {
        encoded: EncodedBelief {
            circuit: c,
            posterior_qubits: regs.next_state.clone(),
            obs_qubits: regs.observation.clone(),
            n_states: ns,
            n_obs: no,
        },
        layout,
        registers: regs,
    })
}

fn is_identity_transition<T: Scalar>(model: &PomdpModel<T>, a: usize) -> bool {
    (0..model.n_states()).all(|s| {
        model
            .transition_row(a, s)
            .iter()
            .enumerate()
            .all(|(s2, &p)| if s2 == s { p == T::one() } else { p == T::zero() })
    })
}

/// Direct encoding for actions that leave the state unchanged: the prior is
/// loaded on the state register and `O(·|s,a)` on the observation register.
pub fn build_direct_circuit<T: Scalar>(model: &PomdpModel<T>, b: &Belief<T>, a: usize) -> Result<EncodedBelief<T>> {
    let (ns, no) = (model.n_states(), model.n_obs());
    if b.len() != ns {
        return Err(Error::LengthMismatch { expected: ns, got: b.len() });
    }
    if a >= model.n_actions() {
        return Err(Error::InvalidArgument(format!("action {a} out of range")));
    }
    if !is_identity_transition(model, a) {
        return Err(Error::InvalidArgument("direct encoding needs an identity transition".into()));
    }
    let n_s = qubits_for(ns).max(1);
    let n_o = qubits_for(no).max(1);
    if n_s + n_o > MAX_SIMULATED_QUBITS {
        return Err(Error::TooLarge { n: n_s + n_o, cap: MAX_SIMULATED_QUBITS });
    }
    let state: Vec<usize> = (0..n_s).collect();
    let obs: Vec<usize> = (n_s..n_s + n_o).collect();
    let (ws, wo) = (1usize << n_s, 1usize << n_o);
    let mut c = Circuit::new(n_s + n_o);
    for g in load_distribution(&state, &[], &[padded(b.probs(), ws)])? {
        c.push(g)?;
    }
    let rows: Vec<Vec<T>> =
        (0..ws).map(|s| if s < ns { padded(model.observation_row(a, s), wo) } else { delta(wo) }).collect();
    for g in load_distribution(&obs, &state, &rows)? {
        c.push(g)?;
    }
    Ok(EncodedBelief { circuit: c, posterior_qubits: state, obs_qubits: obs, n_states: ns, n_obs: no })
}

/// Two-qubit circuit for a binary sensor: qubit 0 holds the state, qubit 1
/// the observation. `p_obs_one[s]` is `P(o=1|s)`.
pub fn build_minimal_circuit<T: Scalar>(b: &Belief<T>, p_obs_one: [T; 2]) -> Result<EncodedBelief<T>> {
    if b.len() != 2 {
        return Err(Error::LengthMismatch { expected: 2, got: b.len() });
    }
    let mut c = Circuit::new(2);
    c.push(Gate::ry(0, T::c(2.0) * b[0].max(T::zero()).min(T::one()).sqrt().acos()))?;
    for (s, &p) in p_obs_one.iter().enumerate() {
        c.push(Gate::ControlledRy { controls: vec![0], pattern: vec![s == 1], target: 1, angle: ry_angle_for(p) })?;
    }
    Ok(EncodedBelief { circuit: c, posterior_qubits: vec![0], obs_qubits: vec![1], n_states: 2, n_obs: 2 })
}

/// Minimal Tiger circuit for the listen action.
pub fn build_minimal_tiger_circuit<T: Scalar>(b: &Belief<T>) -> Result<EncodedBelief<T>> {
    let miss = T::c(1.0 - crate::pomdp::model::TIGER_ACCURACY);
    build_minimal_circuit(b, [miss, T::one() - miss])
}

/// Three-qubit corridor circuit: prior on qubits 0-1, one doubly-controlled
/// Ry per state writing `P(hear-right|s)` onto qubit 2.
pub fn build_corridor4_circuit<T: Scalar>(prior: &Belief<T>) -> Result<EncodedBelief<T>> {
    if prior.len() != 4 {
        return Err(Error::LengthMismatch { expected: 4, got: prior.len() });
    }
    let mut c = Circuit::new(3);
    for g in load_distribution(&[0, 1], &[], &[prior.probs().to_vec()])? {
        c.push(g)?;
    }
    for (s, &hl) in crate::pomdp::model::CORRIDOR_HEAR_LEFT.iter().enumerate() {
        c.push(Gate::ControlledRy {
            controls: vec![0, 1],
            pattern: bits_of(s, 2),
            target: 2,
            angle: ry_angle_for(T::c(1.0 - hl)),
        })?;
    }
    Ok(EncodedBelief { circuit: c, posterior_qubits: vec![0, 1], obs_qubits: vec![2], n_states: 4, n_obs: 2 })
}

/// Picks the smallest available encoding for `(model, a)`.
pub fn encode<T: Scalar>(model: &PomdpModel<T>, b: &Belief<T>, a: usize) -> Result<EncodedBelief<T>> {
    if is_identity_transition(model, a) {
        build_direct_circuit(model, b, a)
    } else {
        build_full_belief_circuit(model, b, a, true).map(|f| f.encoded)
    }
}
