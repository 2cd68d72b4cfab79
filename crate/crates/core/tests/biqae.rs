use approx::assert_abs_diff_eq;
use quantum_autonomy::belief::{build_minimal_tiger_circuit, GroverSetup};
use quantum_autonomy::biqae::*;
use quantum_autonomy::pomdp::Belief;
use quantum_autonomy::rng;
use quantum_autonomy::sim::NoiseModel;

#[test]
fn coverage_and_accuracy_small_sweep() {
    let cfg = BiqaeConfig::default();
    let rows = sweep(&[0.1, 0.3, 0.5, 0.7], 20, &cfg, NoiseModel::noiseless(), 42).unwrap();
    assert_eq!(rows.len(), 80);
    let covered = rows.iter().filter(|r| r.covered).count();
    assert!(covered >= 68, "coverage {covered}/80");
    let mut err: Vec<f64> = rows.iter().filter(|r| r.a_true == 0.5).map(|r| r.abs_error).collect();
    assert!(median(&mut err) < 0.02);
}

#[test]
fn sweep_is_reproducible_regardless_of_threads() {
    let cfg = BiqaeConfig { max_iterations: 3, ..Default::default() };
    let a = sweep(&[0.2, 0.6], 8, &cfg, NoiseModel::noiseless(), 7).unwrap();
    let b = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| sweep(&[0.2, 0.6], 8, &cfg, NoiseModel::noiseless(), 7).unwrap());
    assert_eq!(a, b);
}

#[test]
fn evidence_oracle_from_belief_circuit() {
    let enc = build_minimal_tiger_circuit(&Belief::new(vec![0.97, 0.03]).unwrap()).unwrap();
    let setup = GroverSetup::for_observation(&enc, 1).unwrap();
    let mut oracle = CircuitOracle::new(setup, NoiseModel::noiseless());
    let res = estimate(&mut oracle, &BiqaeConfig::default(), &mut rng::seeded(42)).unwrap();
    assert_abs_diff_eq!(res.a_hat, 0.171, epsilon = 0.01);
    assert_eq!(res.rounds.first().map(|r| r.k), Some(0));
}

#[test]
fn ideal_and_circuit_oracles_agree_in_law() {
    let cfg = BiqaeConfig { max_iterations: 4, ..Default::default() };
    let mut ideal = IdealOracle { a: 0.3 };
    let mut circ = CircuitOracle::<f64>::single_qubit(0.3, NoiseModel::noiseless()).unwrap();
    let a = estimate(&mut ideal, &cfg, &mut rng::seeded(1)).unwrap();
    let b = estimate(&mut circ, &cfg, &mut rng::seeded(1)).unwrap();
    assert_eq!(a.rounds, b.rounds);
}

#[test]
fn query_accounting() {
    let cfg = BiqaeConfig { max_iterations: 3, epsilon: 1e-12, ..Default::default() };
    let res = estimate(&mut IdealOracle { a: 0.4 }, &cfg, &mut rng::seeded(3)).unwrap();
    let ks: Vec<usize> = res.rounds.iter().map(|r| r.k).collect();
    assert_eq!(ks, vec![0, 1, 3, 9]);
    assert_eq!(res.oracle_queries, (1 + 3 + 7 + 19) * 300);
}

#[test]
fn invalid_configs_rejected() {
    let mut o = IdealOracle { a: 0.5 };
    let mut r = rng::seeded(0);
    for cfg in [
        BiqaeConfig { shots: 0, ..Default::default() },
        BiqaeConfig { mass: 1.0, ..Default::default() },
        BiqaeConfig { epsilon: 0.0, ..Default::default() },
        BiqaeConfig { max_iterations: 0, ..Default::default() },
    ] {
        assert!(estimate(&mut o, &cfg, &mut r).is_err());
    }
}

#[test]
fn gaussian_prior_concentrates() {
    let mut post = AmplitudePosterior::<f64>::new(4096, Prior::Gaussian { mean: 0.3, std: 0.01 }).unwrap();
    assert_abs_diff_eq!(post.mean_a(), 0.3, epsilon = 2e-3);
    let before = post.hpd(0.95).unwrap().width();
    post.update(1, 150, 300).unwrap();
    assert!(post.hpd(0.95).unwrap().width() <= before + 1e-9);
}

// Noiseless estimation error in `a` scales like sin 2θ, largest at a = 0.5,
// so the small-amplitude error cannot exceed the mid-range error. Kept as a
// record of the check; run with `--ignored` to see it fail.
#[test]
#[ignore = "error profile in a is an inverted U for noiseless oracles"]
fn uniform_prior_error_is_u_shaped() {
    let rows = sweep(&[0.1, 0.5], 100, &BiqaeConfig::default(), NoiseModel::noiseless(), 42).unwrap();
    let med = |a: f64| {
        let mut e: Vec<f64> = rows.iter().filter(|r| r.a_true == a).map(|r| r.abs_error).collect();
        median(&mut e)
    };
    assert!(med(0.1) > med(0.5), "err(0.1) = {:.2e}, err(0.5) = {:.2e}", med(0.1), med(0.5));
}
