use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mtda::{to_ising, IsingInstance, QuboInstance};
use crate::rng::{self, SimRng};
use crate::sim::{run_noisy, Counts, NoiseModel};
use crate::solvers::{brute_force_qubo, decode_topk, Decoded};

use super::circuit::{build_qaoa_circuit, expectation_from_state, qaoa_state};
use super::schedule::{Basis, FpcSchedule};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NelderMeadConfig {
    pub max_iterations: usize,
    pub initial_step: f64,
    /// Stop when the simplex's value spread falls below this.
    pub tolerance: f64,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self { max_iterations: 200, initial_step: 0.2, tolerance: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
}

/// Derivative-free simplex minimisation (standard reflection, expansion,
/// contraction and shrink coefficients). Returns the best point seen.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], cfg: &NelderMeadConfig) -> Minimum {
    let n = x0.len();
    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() { f64::INFINITY } else { v }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0, &mut evals)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += cfg.initial_step;
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }
    let mut iterations = 0;
    while iterations < cfg.max_iterations && n > 0 {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if (simplex[n].1 - simplex[0].1).abs() <= cfg.tolerance {
            break;
        }
        iterations += 1;
        let centroid: Vec<f64> = (0..n).map(|d| simplex[..n].iter().map(|p| p.0[d]).sum::<f64>() / n as f64).collect();
        let worst = simplex[n].clone();
        let along = |t: f64| -> Vec<f64> { (0..n).map(|d| centroid[d] + t * (worst.0[d] - centroid[d])).collect() };
        let xr = along(-1.0);
        let fr = eval(&xr, &mut evals);
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = eval(&xe, &mut evals);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let x = along(-0.5);
                let v = eval(&x, &mut evals);
                (x, v)
            } else {
                let x = along(0.5);
                let v = eval(&x, &mut evals);
                (x, v)
            };
            if fc < worst.1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for p in simplex.iter_mut().skip(1) {
                    for d in 0..n {
                        p.0[d] = best[d] + 0.5 * (p.0[d] - best[d]);
                    }
                    p.1 = eval(&p.0, &mut evals);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum { x, value, iterations, evaluations: evals }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QaoaConfig {
    pub k: usize,
    pub p: usize,
    pub basis: Basis,
    pub optimizer: NelderMeadConfig,
    pub shots: u64,
    /// Number of most frequent outcomes examined when decoding.
    pub top_k: usize,
}

impl Default for QaoaConfig {
    fn default() -> Self {
        Self { k: 3, p: 1, basis: Basis::Polynomial, optimizer: NelderMeadConfig::default(), shots: 4096, top_k: 10 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QaoaResult {
    pub schedule: FpcSchedule,
    pub angles: Vec<(f64, f64)>,
    /// `⟨H_C⟩` in the instance's own energy units.
    pub expectation: f64,
    pub initial_expectation: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub histogram: Counts,
}

/// Angles act on `H_C / max|coefficient|` so one schedule fits any energy scale.
pub fn normalised(ising: &IsingInstance) -> IsingInstance {
    let m = ising.max_coefficient();
    if m > 0.0 { ising.scaled(1.0 / m) } else { ising.clone() }
}

/// Optimises the `2k` schedule coefficients from the warm-start ramp and
/// samples the final state.
pub fn optimize(ising: &IsingInstance, cfg: &QaoaConfig, rng: &mut SimRng) -> Result<QaoaResult> {
    if cfg.p == 0 || cfg.k == 0 {
        return Err(Error::InvalidArgument("p and k must be at least 1".into()));
    }
    if cfg.shots == 0 {
        return Err(Error::ZeroShots);
    }
    let scaled = normalised(ising);
    let diag = ising.diagonal();
    let warm = FpcSchedule::warm_start(cfg.k, cfg.basis)?;
    let value = |s: &FpcSchedule| -> f64 {
        let angles = s.evaluate(cfg.p).expect("p >= 1");
        let sv = qaoa_state::<f64>(&scaled, &diag, &angles).expect("sized diagonal");
        expectation_from_state(&sv, &diag)
    };
    let initial = value(&warm);
    let min = nelder_mead(|x| value(&warm.with_params(x)), &warm.params(), &cfg.optimizer);
    let (schedule, expectation) =
        if min.value <= initial { (warm.with_params(&min.x), min.value) } else { (warm.clone(), initial) };
    let angles = schedule.evaluate(cfg.p)?;
    let sv = qaoa_state::<f64>(&scaled, &diag, &angles)?;
    let histogram = sv.sample_counts(cfg.shots, rng)?;
    Ok(QaoaResult {
        schedule,
        angles,
        expectation,
        initial_expectation: initial,
        iterations: min.iterations,
        evaluations: min.evaluations,
        histogram,
    })
}

/// Angles to apply to the raw (unnormalised) instance.
pub fn physical_angles(ising: &IsingInstance, angles: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let m = ising.max_coefficient();
    let s = if m > 0.0 { 1.0 / m } else { 1.0 };
    angles.iter().map(|&(g, b)| (g * s, b)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: usize,
    pub p: usize,
    pub n_params: usize,
    pub seed: u64,
    pub objective: f64,
    pub quality_pct: f64,
    pub feasible: bool,
}

/// Runs every `(k, p, seed)` combination on one QUBO. The reference optimum
/// comes from exhaustive search.
pub fn fpc_sensitivity_sweep(
    qubo: &QuboInstance,
    ks: &[usize],
    ps: &[usize],
    seeds: &[u64],
    base: &QaoaConfig,
) -> Result<Vec<SweepRow>> {
    let ising = to_ising(qubo);
    let (_, reference) = brute_force_qubo(qubo)?;
    let jobs: Vec<(usize, usize, u64)> = ks
        .iter()
        .flat_map(|&k| ps.iter().flat_map(move |&p| seeds.iter().map(move |&s| (k, p, s))))
        .collect();
    jobs.par_iter()
        .map(|&(k, p, seed)| {
            let cfg = QaoaConfig { k, p, ..base.clone() };
            let res = optimize(&ising, &cfg, &mut rng::seeded(seed))?;
            let d = decode_topk(&res.histogram, qubo, cfg.top_k, reference)?;
            Ok(SweepRow {
                k,
                p,
                n_params: res.schedule.n_params(),
                seed,
                objective: d.energy,
                quality_pct: d.quality.map_or(f64::NAN, |q| 100.0 * q),
                feasible: qubo.is_feasible(&qubo.bits_of_index(d.index)),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub k: usize,
    pub p: usize,
    pub n_params: usize,
    pub mean_objective: f64,
    pub feasibility_pct: f64,
}

pub fn summarize(rows: &[SweepRow]) -> Vec<SweepSummary> {
    let mut keys: Vec<(usize, usize)> = rows.iter().map(|r| (r.k, r.p)).collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter()
        .map(|(k, p)| {
            let group: Vec<&SweepRow> = rows.iter().filter(|r| r.k == k && r.p == p).collect();
            let n = group.len() as f64;
            SweepSummary {
                k,
                p,
                n_params: group[0].n_params,
                mean_objective: group.iter().map(|r| r.objective).sum::<f64>() / n,
                feasibility_pct: 100.0 * group.iter().filter(|r| r.feasible).count() as f64 / n,
            }
        })
        .collect()
}

/// Simulator convergence needed before parameters are worth transferring.
pub const TRANSFER_THRESHOLD: f64 = 0.95;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub sim: Decoded,
    pub noisy: Decoded,
    /// Simulator quality reached the transfer threshold.
    pub recommended: bool,
}

/// Replays optimised angles on a noisy trajectory run of the gate-level circuit.
pub fn warm_start_transfer(
    qubo: &QuboInstance,
    result: &QaoaResult,
    noise: NoiseModel,
    shots: u64,
    top_k: usize,
    rng: &mut SimRng,
) -> Result<TransferReport> {
    let ising = to_ising(qubo);
    let (_, reference) = brute_force_qubo(qubo)?;
    let sim = decode_topk(&result.histogram, qubo, top_k, reference)?;
    let circuit = build_qaoa_circuit::<f64>(&ising, &physical_angles(&ising, &result.angles))?;
    let counts = run_noisy(&circuit, &noise, shots, rng)?;
    let noisy = decode_topk(&counts, qubo, top_k, reference)?;
    let recommended = sim.quality.is_some_and(|q| q >= TRANSFER_THRESHOLD);
    Ok(TransferReport { sim, noisy, recommended })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mtda::{build_qubo, CostMatrix};

    #[test]
    fn nelder_mead_quadratic() {
        let m = nelder_mead(|x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2), &[0.0, 0.0], &NelderMeadConfig {
            max_iterations: 500,
            ..Default::default()
        });
        assert!((m.x[0] - 1.0).abs() < 1e-3 && (m.x[1] + 2.0).abs() < 1e-3);
        let capped = nelder_mead(|x| x[0].powi(2), &[5.0], &NelderMeadConfig { max_iterations: 3, ..Default::default() });
        assert_eq!(capped.iterations, 3);
    }

    #[test]
    fn single_spin_reaches_ground_state() {
        let is = IsingInstance { h: vec![1.0], j: vec![], offset: 0.0 };
        let res = optimize(&is, &QaoaConfig { k: 1, p: 1, ..Default::default() }, &mut rng::seeded(42)).unwrap();
        assert!((res.expectation + 1.0).abs() < 0.01, "{}", res.expectation);
        assert!(res.expectation <= res.initial_expectation);
        assert_eq!(res.histogram.total(), 4096);
    }

    #[test]
    fn parameter_count_is_depth_independent() {
        let cm = CostMatrix::from_rows(&[vec![-20.0, -8.0], vec![-6.0, -30.0]], 0.0, 0.0).unwrap();
        let q = build_qubo(&cm, None).unwrap();
        let is = to_ising(&q);
        for p in [4, 8, 16] {
            let cfg = QaoaConfig { k: 3, p, optimizer: NelderMeadConfig { max_iterations: 5, ..Default::default() }, ..Default::default() };
            let res = optimize(&is, &cfg, &mut rng::seeded(1)).unwrap();
            assert_eq!(res.schedule.n_params(), 6);
            assert_eq!(res.angles.len(), p);
        }
    }

    #[test]
    fn sweep_and_transfer() {
        let cm = CostMatrix::from_rows(&[vec![-20.0]], 0.0, 0.0).unwrap();
        let q = build_qubo(&cm, None).unwrap();
        let base = QaoaConfig { optimizer: NelderMeadConfig { max_iterations: 40, ..Default::default() }, ..Default::default() };
        let rows = fpc_sensitivity_sweep(&q, &[1, 3], &[1, 2], &[1, 2], &base).unwrap();
        assert_eq!(rows.len(), 8);
        // Three variables: the optimum is always among the ten most frequent.
        assert!(rows.iter().all(|r| r.feasible && (r.quality_pct - 100.0).abs() < 1e-9));
        let summary = summarize(&rows);
        assert_eq!(summary.len(), 4);
        assert!(summary.iter().all(|s| s.feasibility_pct == 100.0));

        let res = optimize(&to_ising(&q), &base, &mut rng::seeded(3)).unwrap();
        let rep = warm_start_transfer(&q, &res, NoiseModel::new(0.001, 0.01).unwrap(), 2000, 10, &mut rng::seeded(3)).unwrap();
        assert!(rep.recommended);
        assert!(rep.noisy.quality.is_some());
    }
}
