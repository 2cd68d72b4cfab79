use serde::{Deserialize, Serialize};

use crate::biqae::{estimate_with, BiqaeConfig, CircuitOracle};
use crate::error::Result;
use crate::pomdp::{Belief, BeliefUpdater, PomdpModel};
use crate::rng::{self, SimRng};
use crate::scalar::Scalar;
use crate::sim::{run_noisy, NoiseModel};

use super::circuits::{build_minimal_circuit, encode, EncodedBelief};
use super::grover::{optimal_iterations_with, GroverSetup, IterationRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode", content = "value")]
pub enum GroverMode {
    #[default]
    Off,
    Optimal(IterationRule),
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode", content = "config")]
pub enum EvidenceReadout {
    /// Marked probability of the prepared state.
    #[default]
    Exact,
    /// Posterior mean of an amplitude-estimation run on the evidence oracle.
    Biqae(BiqaeConfig),
}

/// Belief update by circuit simulation.
///
/// With `shots = None` and no noise the posterior is read from the exact
/// post-selected statevector; otherwise from sampled counts.
#[derive(Debug, Clone)]
pub struct CircuitUpdater {
    pub shots: Option<u64>,
    pub noise: NoiseModel,
    pub grover: GroverMode,
    pub evidence: EvidenceReadout,
    rng: SimRng,
    last_k: usize,
}

impl CircuitUpdater {
    pub fn new(shots: Option<u64>, noise: NoiseModel, grover: GroverMode, evidence: EvidenceReadout, seed: u64) -> Self {
        Self { shots, noise, grover, evidence, rng: rng::seeded(seed), last_k: 0 }
    }

    pub fn exact() -> Self {
        Self::new(None, NoiseModel::noiseless(), GroverMode::Off, EvidenceReadout::Exact, rng::DEFAULT_SEED)
    }

    /// Grover iterations used by the most recent update.
    pub fn last_iterations(&self) -> usize {
        self.last_k
    }

    fn encode<T: Scalar>(model: &PomdpModel<T>, b: &Belief<T>, a: usize) -> Result<EncodedBelief<T>> {
        let identity = (0..model.n_states()).all(|s| model.transition(a, s, s) == T::one());
        if identity && model.n_states() == 2 && model.n_obs() == 2 {
            build_minimal_circuit(b, [model.observation(a, 0, 1), model.observation(a, 1, 1)])
        } else {
            encode(model, b, a)
        }
    }

    fn iterations(&self, base: f64) -> Result<usize> {
        Ok(match self.grover {
            GroverMode::Off => 0,
            GroverMode::Fixed(k) => k,
            GroverMode::Optimal(rule) if base > 0.0 && base < 1.0 => optimal_iterations_with(base, rule)?,
            GroverMode::Optimal(_) => 0,
        })
    }
}

impl<T: Scalar> BeliefUpdater<T> for CircuitUpdater {
    fn update(&mut self, model: &PomdpModel<T>, b: &Belief<T>, a: usize, o: usize) -> Result<(Belief<T>, T)> {
        let enc = Self::encode(model, b, a)?;
        let setup = GroverSetup::for_observation(&enc, o)?;
        let base = setup.base_probability();
        let k = self.iterations(base.to_f64_lossy())?;
        self.last_k = k;

        let posterior = match self.shots {
            None if self.noise.is_noiseless() => enc.posterior_from(&setup.amplify(k), o)?.0,
            shots => {
                let shots = shots.unwrap_or(8192);
                let counts = run_noisy(&setup.circuit(k), &self.noise, shots, &mut self.rng)?;
                enc.posterior_from_counts(&counts, o)?
            }
        };

        let evidence = match self.evidence {
            EvidenceReadout::Exact => base,
            EvidenceReadout::Biqae(cfg) => {
                let mut oracle = CircuitOracle::new(setup, self.noise);
                T::c(estimate_with::<T, _>(&mut oracle, &cfg, &mut self.rng)?.a_hat)
            }
        };
        Ok((posterior, evidence))
    }
}
