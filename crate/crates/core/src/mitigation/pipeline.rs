use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fold::fold;
use super::readout::{mitigate_frequencies, AssignmentMatrix};
use super::richardson::richardson_extrapolate;
use crate::error::{Error, Result};
use crate::rng;
use crate::sim::{run_noisy, Circuit, Counts, Gate, NoiseModel};

pub const DEFAULT_SCALES: [usize; 3] = [1, 3, 5];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Stage {
    Zne { scales: Vec<usize>, order: usize },
    Readout { matrix: AssignmentMatrix },
}

impl Stage {
    pub fn linear_zne() -> Self {
        Stage::Zne { scales: DEFAULT_SCALES.to_vec(), order: 1 }
    }
}

/// Ordered chain of mitigation stages. Readout stages rewrite every histogram
/// in declaration order; a ZNE stage runs the circuit at each scale factor
/// and extrapolates the observable. At most one ZNE stage is allowed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MitigationPipeline {
    pub stages: Vec<Stage>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineEstimate {
    /// Observable on the unfolded circuit without any correction.
    pub raw: f64,
    pub mitigated: f64,
    /// `(λ, value)` after count-level stages, one per scale.
    pub points: Vec<(f64, f64)>,
    pub clip_mass: f64,
}

impl MitigationPipeline {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, stage: Stage) -> Self {
        self.stages.push(stage);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let mut zne = 0;
        for s in &self.stages {
            if let Stage::Zne { scales, order } = s {
                zne += 1;
                if scales.is_empty() || scales.iter().any(|&l| l == 0 || l % 2 == 0) {
                    return Err(Error::InvalidArgument(format!("ZNE scales must be odd and positive: {scales:?}")));
                }
                if *order == 0 || *order >= scales.len() {
                    return Err(Error::InvalidArgument(format!(
                        "ZNE order {order} needs more than {order} scale factors"
                    )));
                }
            }
        }
        if zne > 1 {
            return Err(Error::InvalidArgument("at most one ZNE stage per pipeline".into()));
        }
        Ok(())
    }

    fn zne(&self) -> Option<(&[usize], usize)> {
        self.stages.iter().find_map(|s| match s {
            Stage::Zne { scales, order } => Some((scales.as_slice(), *order)),
            _ => None,
        })
    }

    /// Applies the readout stages in order. Returns the distribution and the
    /// summed clip mass.
    pub fn transform_counts(&self, counts: &Counts) -> Result<(Vec<f64>, f64)> {
        let mut probs = counts.frequencies();
        let mut clip = 0.0;
        for s in &self.stages {
            if let Stage::Readout { matrix } = s {
                let m = mitigate_frequencies(&probs, matrix)?;
                probs = m.probs;
                clip += m.clip_mass;
            }
        }
        Ok((probs, clip))
    }

    /// `execute(circuit, λ)` must return counts for the given (already folded) circuit.
    pub fn estimate<F, O>(&self, circuit: &Circuit<f64>, mut execute: F, observable: O) -> Result<PipelineEstimate>
    where
        F: FnMut(&Circuit<f64>, usize) -> Result<Counts>,
        O: Fn(&[f64]) -> f64,
    {
        self.validate()?;
        let (scales, order) = self.zne().unwrap_or((&[1], 0));
        let mut points = Vec::with_capacity(scales.len());
        let mut raw = None;
        let mut clip_mass = 0.0;
        for &l in scales {
            let counts = execute(&fold(circuit, l)?, l)?;
            if l == 1 {
                raw = Some(observable(&counts.frequencies()));
            }
            let (probs, clip) = self.transform_counts(&counts)?;
            clip_mass += clip;
            points.push((l as f64, observable(&probs)));
        }
        let raw = match raw {
            Some(r) => r,
            None => observable(&execute(circuit, 1)?.frequencies()),
        };
        let mitigated = if order == 0 { points[0].1 } else { richardson_extrapolate(&points, order)? };
        Ok(PipelineEstimate { raw, mitigated, points, clip_mass })
    }
}

/// `⟨Z⊗…⊗Z⟩` over `qubits` of a dense distribution.
pub fn parity(probs: &[f64], qubits: &[usize]) -> f64 {
    let mask: usize = qubits.iter().map(|q| 1 << q).sum();
    probs.iter().enumerate().map(|(i, p)| if (i & mask).count_ones() % 2 == 0 { *p } else { -*p }).sum()
}

/// `|Φ+⟩` preparation with a single two-qubit gate.
pub fn bell_circuit() -> Circuit<f64> {
    Circuit::from_gates(2, vec![Gate::H(0), Gate::H(1), Gate::Cz(0, 1), Gate::H(1)]).expect("valid gates")
}

/// Bell preparation padded with cancelling CZ pairs up to at least
/// `two_qubit_gates` entangling gates. The ideal `⟨ZZ⟩` stays 1.
pub fn deep_bell_circuit(two_qubit_gates: usize) -> Circuit<f64> {
    let mut c = Circuit::new(2);
    c.push(Gate::H(0)).and_then(|c| c.push(Gate::H(1))).expect("valid gates");
    let pairs = two_qubit_gates.saturating_sub(1).div_ceil(2);
    for _ in 0..pairs {
        c.push(Gate::Cz(0, 1)).and_then(|c| c.push(Gate::Cz(0, 1))).expect("valid gates");
    }
    c.push(Gate::Cz(0, 1)).and_then(|c| c.push(Gate::H(1))).expect("valid gates");
    c
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZneRow {
    pub seed: u64,
    pub ideal: f64,
    pub raw: f64,
    pub mitigated: f64,
    pub raw_error: f64,
    pub mitigated_error: f64,
    pub improved: bool,
}

/// Repeats ZNE on `⟨ZZ⟩` of qubits 0 and 1 once per seed. Scale `i` of a seed
/// draws from stream `i` of that seed.
pub fn zne_study(
    circuit: &Circuit<f64>,
    noise: NoiseModel,
    shots: u64,
    pipeline: &MitigationPipeline,
    seeds: &[u64],
) -> Result<Vec<ZneRow>> {
    let ideal = circuit.simulate().parity_expectation(&[0, 1]);
    seeds
        .par_iter()
        .map(|&seed| {
            let est = pipeline.estimate(
                circuit,
                |c, l| run_noisy(c, &noise, shots, &mut rng::stream(seed, l as u64)),
                |p| parity(p, &[0, 1]),
            )?;
            let raw_error = (est.raw - ideal).abs();
            let mitigated_error = (est.mitigated - ideal).abs();
            Ok(ZneRow {
                seed,
                ideal,
                raw: est.raw,
                mitigated: est.mitigated,
                raw_error,
                mitigated_error,
                improved: mitigated_error < raw_error,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mitigation::ReadoutError;

    #[test]
    fn empty_pipeline_is_identity() {
        let c = bell_circuit();
        let noise = NoiseModel::two_qubit(0.05).unwrap();
        let p = MitigationPipeline::new();
        let est = p.estimate(&c, |c, _| run_noisy(c, &noise, 5000, &mut rng::seeded(1)), |p| parity(p, &[0, 1])).unwrap();
        let direct = run_noisy(&c, &noise, 5000, &mut rng::seeded(1)).unwrap();
        assert_eq!(est.raw, est.mitigated);
        assert_eq!(est.raw, direct.parity_expectation(&[0, 1]));
        let (probs, clip) = p.transform_counts(&direct).unwrap();
        assert_eq!(probs, direct.frequencies());
        assert_eq!(clip, 0.0);
    }

    #[test]
    fn deep_circuit_gate_count() {
        let c = deep_bell_circuit(60);
        assert!(c.multi_qubit_gate_count() >= 60);
        assert!((c.simulate().parity_expectation(&[0, 1]) - 1.0).abs() < 1e-12);
        assert_eq!(deep_bell_circuit(1).multi_qubit_gate_count(), 1);
    }

    #[test]
    fn validation() {
        let two = MitigationPipeline::new().with(Stage::linear_zne()).with(Stage::linear_zne());
        assert!(two.validate().is_err());
        let even = MitigationPipeline::new().with(Stage::Zne { scales: vec![1, 2], order: 1 });
        assert!(even.validate().is_err());
        let over = MitigationPipeline::new().with(Stage::Zne { scales: vec![1, 3], order: 2 });
        assert!(over.validate().is_err());
    }

    #[test]
    fn zne_improves_bell() {
        let p = MitigationPipeline::new().with(Stage::linear_zne());
        let rows = zne_study(&bell_circuit(), NoiseModel::two_qubit(0.02).unwrap(), 100_000, &p, &[1, 2, 3, 4, 5]).unwrap();
        assert!(rows.iter().filter(|r| r.improved).count() >= 4, "{rows:?}");
    }

    #[test]
    fn chained_readout_then_zne() {
        let flips = [ReadoutError::symmetric(0.03).unwrap(); 2];
        let p = MitigationPipeline::new()
            .with(Stage::Readout { matrix: crate::mitigation::AssignmentMatrix::from_flips(&flips) })
            .with(Stage::linear_zne());
        let noise = NoiseModel::two_qubit(0.01).unwrap();
        let est = p
            .estimate(
                &bell_circuit(),
                |c, l| {
                    let mut r = rng::stream(7, l as u64);
                    let counts = run_noisy(c, &noise, 100_000, &mut r)?;
                    crate::mitigation::apply_readout_error(&counts, &flips, &mut r)
                },
                |p| parity(p, &[0, 1]),
            )
            .unwrap();
        assert!((est.mitigated - 1.0).abs() < (est.raw - 1.0).abs());
    }
}
