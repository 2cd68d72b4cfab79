use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::belief::GroverSetup;
use crate::error::{Error, Result};
use crate::rng;
use crate::scalar::Scalar;
use crate::sim::{run_noisy, Circuit, Gate, NoiseModel};

use super::posterior::{AmplitudePosterior, Hpd, Prior, DEFAULT_GRID_POINTS};

/// Something that can report successes after `k` Grover iterates.
pub trait AmplitudeOracle {
    fn sample(&mut self, k: usize, shots: u64, rng: &mut rng::SimRng) -> Result<u64>;
}

fn binomial(n: u64, p: f64, rng: &mut rng::SimRng) -> Result<u64> {
    let d = Binomial::new(n, p.clamp(0.0, 1.0)).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(d.sample(rng))
}

/// Circuit oracle: amplifies, measures, counts shots hitting the marked outcome.
#[derive(Debug, Clone)]
pub struct CircuitOracle<T> {
    pub setup: GroverSetup<T>,
    pub noise: NoiseModel,
}

impl<T: Scalar> CircuitOracle<T> {
    pub fn new(setup: GroverSetup<T>, noise: NoiseModel) -> Self {
        Self { setup, noise }
    }

    /// Single-qubit oracle `Ry(2·arcsin√a)` marking `|1⟩`.
    pub fn single_qubit(a: f64, noise: NoiseModel) -> Result<Self> {
        let mut c = Circuit::new(1);
        c.push(Gate::ry(0, T::c(2.0 * a.clamp(0.0, 1.0).sqrt().asin())))?;
        Ok(Self::new(GroverSetup::new(c, vec![(0, true)])?, noise))
    }
}

impl<T: Scalar> AmplitudeOracle for CircuitOracle<T> {
    fn sample(&mut self, k: usize, shots: u64, rng: &mut rng::SimRng) -> Result<u64> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        if self.noise.is_noiseless() {
            let p = self.setup.success_probability(&self.setup.amplify(k)).to_f64_lossy();
            return binomial(shots, p, rng);
        }
        let counts = run_noisy(&self.setup.circuit(k), &self.noise, shots, rng)?;
        let marked = self.setup.marked();
        Ok(counts
            .iter()
            .filter(|(idx, _)| marked.iter().all(|&(q, b)| ((idx >> q) & 1 == 1) == b))
            .map(|(_, n)| n)
            .sum())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BiqaeConfig {
    pub max_iterations: usize,
    pub shots: u64,
    /// `k_t = base^t`.
    pub base: usize,
    /// Stop once the HPD width drops below this.
    pub epsilon: f64,
    pub mass: f64,
    /// Minimum grid size; the grid is refined to resolve the final round.
    pub grid_points: usize,
    pub prior: Prior,
    /// Prepend a `k=0` round when the prior is uniform.
    pub calibration: bool,
    /// Use this `k` every round instead of the exponential schedule.
    pub fixed_k: Option<usize>,
}

impl Default for BiqaeConfig {
    fn default() -> Self {
        Self {
            max_iterations: 6,
            shots: 300,
            base: 3,
            epsilon: 1e-5,
            mass: 0.95,
            grid_points: DEFAULT_GRID_POINTS,
            prior: Prior::Uniform,
            calibration: true,
            fixed_k: None,
        }
    }
}

/// Cap on the refined grid.
pub const MAX_GRID_POINTS: usize = 1 << 21;

impl BiqaeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::ZeroShots);
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidArgument("epsilon must be positive".into()));
        }
        if !(self.mass > 0.0 && self.mass < 1.0) {
            return Err(Error::InvalidArgument("credible mass must lie in (0,1)".into()));
        }
        if self.base < 2 && self.fixed_k.is_none() {
            return Err(Error::InvalidArgument("schedule base must be at least 2".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be at least 1".into()));
        }
        Ok(())
    }

    pub fn schedule(&self) -> Vec<usize> {
        let mut ks = Vec::with_capacity(self.max_iterations + 1);
        if let Some(k) = self.fixed_k {
            ks.resize(self.max_iterations, k);
            return ks;
        }
        if self.calibration && self.prior.is_uniform() {
            ks.push(0);
        }
        let mut k = 1usize;
        for _ in 0..self.max_iterations {
            ks.push(k);
            k = k.saturating_mul(self.base);
        }
        ks
    }

    /// Grid fine enough for about four points per posterior standard
    /// deviation after the largest scheduled round.
    pub fn grid_size(&self) -> usize {
        let k_max = self.schedule().into_iter().max().unwrap_or(0) as f64;
        let sigma = 1.0 / (2.0 * (2.0 * k_max + 1.0) * (self.shots as f64).sqrt());
        let wanted = (4.0 * std::f64::consts::FRAC_PI_2 / sigma).ceil() as usize;
        wanted.next_power_of_two().clamp(self.grid_points, MAX_GRID_POINTS.max(self.grid_points))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Round {
    pub k: usize,
    pub successes: u64,
    pub shots: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiqaeResult {
    pub a_hat: f64,
    pub interval: Hpd,
    pub iterations: usize,
    pub oracle_queries: u64,
    pub rounds: Vec<Round>,
}

/// Runs the exponential schedule, stopping early once the HPD is narrower than
/// `epsilon`.
pub fn estimate<O: AmplitudeOracle + ?Sized>(
    oracle: &mut O,
    cfg: &BiqaeConfig,
    rng: &mut rng::SimRng,
) -> Result<BiqaeResult> {
    estimate_with::<f64, O>(oracle, cfg, rng)
}

pub fn estimate_with<T: Scalar, O: AmplitudeOracle + ?Sized>(
    oracle: &mut O,
    cfg: &BiqaeConfig,
    rng: &mut rng::SimRng,
) -> Result<BiqaeResult> {
    cfg.validate()?;
    let mut post = AmplitudePosterior::<T>::new(cfg.grid_size(), cfg.prior)?;
    let mut rounds = Vec::new();
    let mut queries = 0u64;
    let mut interval = post.hpd(cfg.mass)?;
    for k in cfg.schedule() {
        let m = oracle.sample(k, cfg.shots, rng)?;
        post.update(k, m, cfg.shots)?;
        queries += (2 * k as u64 + 1) * cfg.shots;
        rounds.push(Round { k, successes: m, shots: cfg.shots });
        interval = post.hpd(cfg.mass)?;
        if interval.width() < cfg.epsilon {
            break;
        }
    }
    Ok(BiqaeResult {
        a_hat: post.mean_a().to_f64_lossy(),
        interval,
        iterations: rounds.len(),
        oracle_queries: queries,
        rounds,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub a_true: f64,
    pub a_hat: f64,
    pub abs_error: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub covered: bool,
    pub oracle_queries: u64,
    pub seed: u64,
}

/// Runs `replicas` seeded estimates per amplitude on single-qubit oracles.
/// Replica `r` of amplitude index `i` uses stream `i·replicas + r` of `seed`.
pub fn sweep(a_values: &[f64], replicas: usize, cfg: &BiqaeConfig, noise: NoiseModel, seed: u64) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let jobs: Vec<(usize, f64, usize)> = a_values
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| (0..replicas).map(move |r| (i, a, r)))
        .collect();
    jobs.par_iter()
        .map(|&(i, a, r)| {
            let stream = (i * replicas + r) as u64;
            let mut g = rng::stream(seed, stream);
            let mut oracle = CircuitOracle::<f64>::single_qubit(a, noise)?;
            let res = estimate(&mut oracle, cfg, &mut g)?;
            Ok(SweepRow {
                a_true: a,
                a_hat: res.a_hat,
                abs_error: (res.a_hat - a).abs(),
                ci_lo: res.interval.lo,
                ci_hi: res.interval.hi,
                covered: res.interval.contains(a),
                oracle_queries: res.oracle_queries,
                seed: stream,
            })
        })
        .collect()
}

/// Analytic oracle with success probability `sin²((2k+1)·arcsin√a)`.
#[derive(Debug, Clone, Copy)]
pub struct IdealOracle {
    pub a: f64,
}

impl AmplitudeOracle for IdealOracle {
    fn sample(&mut self, k: usize, shots: u64, rng: &mut rng::SimRng) -> Result<u64> {
        binomial(shots, crate::belief::amplified_probability(self.a, k), rng)
    }
}

impl<F> AmplitudeOracle for F
where
    F: FnMut(usize, u64, &mut rng::SimRng) -> Result<u64>,
{
    fn sample(&mut self, k: usize, shots: u64, rng: &mut rng::SimRng) -> Result<u64> {
        self(k, shots, rng)
    }
}

pub fn median(xs: &mut [f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}
