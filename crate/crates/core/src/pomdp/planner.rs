use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::scalar::Scalar;

use super::model::{Belief, PomdpModel};
use super::update::{belief_update, evidence_probability, hellinger, MIN_EVIDENCE};

/// Root-level belief update used by the planner and the closed loop.
///
/// Returns the posterior and the evidence `P(o|b,a)` the provider measured.
pub trait BeliefUpdater<T: Scalar> {
    fn update(&mut self, model: &PomdpModel<T>, b: &Belief<T>, a: usize, o: usize) -> Result<(Belief<T>, T)>;
}

/// Exact classical Bayes filter.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactUpdater;

impl<T: Scalar> BeliefUpdater<T> for ExactUpdater {
    fn update(&mut self, model: &PomdpModel<T>, b: &Belief<T>, a: usize, o: usize) -> Result<(Belief<T>, T)> {
        belief_update(model, b, a, o)
    }
}

impl<T, F> BeliefUpdater<T> for F
where
    T: Scalar,
    F: FnMut(&PomdpModel<T>, &Belief<T>, usize, usize) -> Result<(Belief<T>, T)>,
{
    fn update(&mut self, model: &PomdpModel<T>, b: &Belief<T>, a: usize, o: usize) -> Result<(Belief<T>, T)> {
        self(model, b, a, o)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlannerConfig {
    pub horizon: usize,
    pub rollouts_per_leaf: usize,
    pub seed: u64,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self { horizon: 1, rollouts_per_leaf: 64, seed: rng::DEFAULT_SEED }
    }
}

impl PlannerConfig {
    pub fn new(horizon: usize, rollouts_per_leaf: usize, seed: u64) -> Result<Self> {
        let cfg = Self { horizon, rollouts_per_leaf, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::InvalidArgument("planner horizon must be at least 1".into()));
        }
        Ok(())
    }
}

fn sample_index<T: Scalar, R: Rng>(probs: &[T], rng: &mut R) -> usize {
    let u = T::c(rng.random::<f64>());
    let mut acc = T::zero();
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.iter().rposition(|&p| p > T::zero()).unwrap_or(0)
}

/// Mean discounted return of uniform-random rollouts of `depth` steps from `b`.
fn rollout_value<T: Scalar, R: Rng>(model: &PomdpModel<T>, b: &Belief<T>, depth: usize, n: usize, rng: &mut R) -> T {
    if depth == 0 || n == 0 {
        return T::zero();
    }
    let gamma = model.discount();
    let mut total = T::zero();
    for _ in 0..n {
        let mut s = sample_index(b.probs(), rng);
        let mut disc = T::one();
        for _ in 0..depth {
            let a = rng.random_range(0..model.n_actions());
            total += disc * model.reward(s, a);
            s = sample_index(model.transition_row(a, s), rng);
            disc *= gamma;
        }
    }
    total / T::from_usize_lossy(n)
}

/// Expected immediate reward `Σ_s b(s) R(s,a)`.
pub fn expected_reward<T: Scalar>(model: &PomdpModel<T>, b: &Belief<T>, a: usize) -> T {
    b.probs().iter().enumerate().map(|(s, &p)| p * model.reward(s, a)).sum()
}

/// Root Q-values `R(b,a) + γ Σ_o P(o|b,a) V̂(B(b,a,o))`.
pub fn q_values<T: Scalar, U: BeliefUpdater<T> + ?Sized>(
    model: &PomdpModel<T>,
    b0: &Belief<T>,
    cfg: &PlannerConfig,
    updater: &mut U,
) -> Result<Vec<T>> {
    cfg.validate()?;
    let depth = cfg.horizon - 1;
    let gamma = model.discount();
    let mut q = Vec::with_capacity(model.n_actions());
    for a in 0..model.n_actions() {
        let mut future = T::zero();
        if depth > 0 {
            for o in 0..model.n_obs() {
                if evidence_probability(model, b0, a, o).to_f64_lossy() < MIN_EVIDENCE {
                    continue;
                }
                let (post, evidence) = updater.update(model, b0, a, o)?;
                let mut r = rng::stream(cfg.seed, (a * model.n_obs() + o) as u64);
                future += evidence * rollout_value(model, &post, depth, cfg.rollouts_per_leaf, &mut r);
            }
        }
        q.push(expected_reward(model, b0, a) + gamma * future);
    }
    Ok(q)
}

/// Horizon-limited lookahead with the provider applied at the root only.
/// Ties go to the lowest action index.
pub fn qbrl_plan<T: Scalar, U: BeliefUpdater<T> + ?Sized>(
    model: &PomdpModel<T>,
    b0: &Belief<T>,
    cfg: &PlannerConfig,
    updater: &mut U,
) -> Result<usize> {
    let q = q_values(model, b0, cfg, updater)?;
    let mut best = 0;
    for (a, &v) in q.iter().enumerate().skip(1) {
        if v > q[best] {
            best = a;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepTrace<T> {
    pub t: usize,
    pub prior: Vec<T>,
    pub action: usize,
    pub observation: usize,
    pub posterior: Vec<T>,
    pub exact_posterior: Vec<T>,
    pub evidence: T,
    pub hellinger: T,
}

/// Action whose transition rows all equal the uniform distribution.
pub fn is_reset_action<T: Scalar>(model: &PomdpModel<T>, a: usize) -> bool {
    let n = model.n_states();
    let u = T::one() / T::from_usize_lossy(n);
    let tol = T::c(1e-12);
    (0..n).all(|s| model.transition_row(a, s).iter().all(|&p| (p - u).abs() < tol))
}

/// Plans and filters along a fixed observation sequence, starting from the
/// uniform belief. Reset actions return the belief to uniform exactly.
pub fn run_closed_loop<T: Scalar, U: BeliefUpdater<T> + ?Sized>(
    model: &PomdpModel<T>,
    observations: &[usize],
    cfg: &PlannerConfig,
    updater: &mut U,
) -> Result<Vec<StepTrace<T>>> {
    run_closed_loop_from(model, Belief::uniform(model.n_states()), observations, cfg, updater)
}

pub fn run_closed_loop_from<T: Scalar, U: BeliefUpdater<T> + ?Sized>(
    model: &PomdpModel<T>,
    initial: Belief<T>,
    observations: &[usize],
    cfg: &PlannerConfig,
    updater: &mut U,
) -> Result<Vec<StepTrace<T>>> {
    let mut b = initial;
    let mut trace = Vec::with_capacity(observations.len());
    for (t, &o) in observations.iter().enumerate() {
        if o >= model.n_obs() {
            return Err(Error::InvalidArgument(format!("observation {o} at step {t} out of range")));
        }
        let step_cfg = PlannerConfig { seed: cfg.seed.wrapping_add(t as u64), ..*cfg };
        let a = qbrl_plan(model, &b, &step_cfg, updater)?;
        let (exact, exact_evidence) = belief_update(model, &b, a, o)?;
        let (posterior, evidence) = if is_reset_action(model, a) {
            (Belief::uniform(model.n_states()), exact_evidence)
        } else {
            updater.update(model, &b, a, o)?
        };
        let h = hellinger(posterior.probs(), exact.probs())?;
        trace.push(StepTrace {
            t,
            prior: b.probs().to_vec(),
            action: a,
            observation: o,
            posterior: posterior.probs().to_vec(),
            exact_posterior: exact.probs().to_vec(),
            evidence,
            hellinger: h,
        });
        b = posterior;
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pomdp::model::{grid, tiger, LISTEN, OPEN_LEFT, OPEN_RIGHT};
    use approx::assert_abs_diff_eq;

    fn plan(b: [f64; 2]) -> usize {
        let m = tiger::<f64>();
        qbrl_plan(&m, &Belief::new(b.to_vec()).unwrap(), &PlannerConfig::default(), &mut ExactUpdater).unwrap()
    }

    #[test]
    fn tiger_root_decisions() {
        assert_eq!(plan([0.5, 0.5]), LISTEN);
        assert_eq!(plan([0.972, 0.028]), OPEN_RIGHT);
        assert_eq!(plan([0.043, 0.957]), OPEN_LEFT);
    }

    #[test]
    fn closed_loop_four_hear_left() {
        let m = tiger::<f64>();
        let trace = run_closed_loop(&m, &[0, 0, 0, 0], &PlannerConfig::default(), &mut ExactUpdater).unwrap();
        let right: Vec<f64> = trace.iter().map(|s| s.posterior[1]).collect();
        assert_abs_diff_eq!(right[0], 0.15, epsilon = 1e-12);
        assert_abs_diff_eq!(right[1], 0.0302, epsilon = 1e-4);
        assert_abs_diff_eq!(right[2], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(right[3], 0.15, epsilon = 1e-12);
        let actions: Vec<usize> = trace.iter().map(|s| s.action).collect();
        assert_eq!(actions, vec![LISTEN, LISTEN, OPEN_RIGHT, LISTEN]);
    }

    #[test]
    fn closed_loop_two_events() {
        let m = tiger::<f64>();
        let trace =
            run_closed_loop(&m, &[0, 0, 0, 1, 1, 1, 0, 0], &PlannerConfig::default(), &mut ExactUpdater).unwrap();
        let events: Vec<(usize, usize)> =
            trace.iter().filter(|s| s.action != LISTEN).map(|s| (s.t, s.action)).collect();
        assert_eq!(events, vec![(2, OPEN_RIGHT), (5, OPEN_LEFT)]);
        for w in trace.windows(2) {
            if w[0].action != LISTEN {
                assert_eq!(w[1].prior, vec![0.5, 0.5]);
            }
        }
        assert!(run_closed_loop(&m, &[], &PlannerConfig::default(), &mut ExactUpdater).unwrap().is_empty());
    }

    #[test]
    fn deeper_horizon_is_deterministic() {
        let m = grid::<f64>(3, 3).unwrap();
        let cfg = PlannerConfig::new(3, 16, 7).unwrap();
        let b = Belief::uniform(9);
        let q1 = q_values(&m, &b, &cfg, &mut ExactUpdater).unwrap();
        let q2 = q_values(&m, &b, &cfg, &mut ExactUpdater).unwrap();
        assert_eq!(q1, q2);
        assert!(PlannerConfig::new(0, 1, 0).is_err());
    }

    #[test]
    fn reward_shift_keeps_action() {
        let m = tiger::<f64>();
        let shifted = m.with_reward_shift(250.0);
        let cfg = PlannerConfig::new(2, 32, 3).unwrap();
        for b0 in [0.1, 0.5, 0.8, 0.97] {
            let b = Belief::new(vec![b0, 1.0 - b0]).unwrap();
            assert_eq!(
                qbrl_plan(&m, &b, &cfg, &mut ExactUpdater).unwrap(),
                qbrl_plan(&shifted, &b, &cfg, &mut ExactUpdater).unwrap()
            );
        }
    }
}
