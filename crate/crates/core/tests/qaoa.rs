use approx::assert_abs_diff_eq;
use quantum_autonomy::biqae::median;
use quantum_autonomy::mtda::*;
use quantum_autonomy::qaoa::*;
use quantum_autonomy::rng;
use quantum_autonomy::sim::NoiseModel;
use quantum_autonomy::solvers::*;
use rand::Rng;

/// 2 tracks × 3 measurements with log-likelihood style negative costs: 11 variables.
fn instance(seed: u64) -> QuboInstance {
    let mut r = rng::seeded(seed);
    let rows: Vec<Vec<f64>> = (0..2).map(|_| (0..3).map(|_| r.random_range(-10.0..-1.0)).collect()).collect();
    build_qubo(&CostMatrix::from_rows(&rows, 0.0, 0.0).unwrap(), None).unwrap()
}

#[test]
fn depth_two_beats_depth_one_in_median() {
    let (mut q1, mut q2) = (Vec::new(), Vec::new());
    for seed in 0..20 {
        let q = instance(seed);
        assert_eq!(q.n_var(), 11);
        let ising = to_ising(&q);
        let (_, reference) = brute_force_qubo(&q).unwrap();
        for (p, out) in [(1, &mut q1), (2, &mut q2)] {
            let cfg = QaoaConfig { k: 2, p, ..Default::default() };
            let res = optimize(&ising, &cfg, &mut rng::seeded(seed)).unwrap();
            assert!(res.expectation <= res.initial_expectation + 1e-12);
            out.push(decode_topk(&res.histogram, &q, 10, reference).unwrap().quality.unwrap());
        }
    }
    assert!(median(&mut q2) >= median(&mut q1));
}

#[test]
fn parameter_count_is_two_k() {
    let ising = to_ising(&instance(1));
    for k in [1, 2, 3, 5] {
        for p in [1, 4, 8, 16] {
            let cfg = QaoaConfig {
                k,
                p,
                optimizer: NelderMeadConfig { max_iterations: 2, ..Default::default() },
                shots: 16,
                ..Default::default()
            };
            let res = optimize(&ising, &cfg, &mut rng::seeded(0)).unwrap();
            assert_eq!(res.schedule.n_params(), 2 * k);
            assert_eq!(res.angles.len(), p);
        }
    }
}

#[test]
fn warm_start_midpoints_closed_form() {
    use std::f64::consts::PI;
    for p in [1, 2, 5, 8] {
        let s = FpcSchedule::warm_start(3, Basis::Polynomial).unwrap();
        let angles = s.evaluate(p).unwrap();
        for (l, (g, b)) in angles.iter().enumerate() {
            let t = (l as f64 + 0.5) / p as f64;
            assert_abs_diff_eq!(*g, PI * t, epsilon = 1e-12);
            assert_abs_diff_eq!(*b, PI / 4.0, epsilon = 1e-12);
        }
    }
}

#[test]
fn gate_circuit_matches_fast_path() {
    let ising = normalised(&to_ising(&instance(4)));
    let angles = FpcSchedule::warm_start(2, Basis::Trigonometric).unwrap().evaluate(3).unwrap();
    let c = build_qaoa_circuit::<f64>(&ising, &angles).unwrap();
    let fast = qaoa_state::<f64>(&ising, &ising.diagonal(), &angles).unwrap();
    assert!(c.simulate().max_abs_diff(&fast) < 1e-9);
    assert_abs_diff_eq!(
        expectation(&ising, &angles).unwrap(),
        expectation_from_state(&fast, &ising.diagonal()),
        epsilon = 1e-9
    );
}

#[test]
fn sweep_rows_and_summary() {
    let q = instance(2);
    let base = QaoaConfig { optimizer: NelderMeadConfig { max_iterations: 30, ..Default::default() }, ..Default::default() };
    let rows = fpc_sensitivity_sweep(&q, &[1, 3], &[2, 8], &[1, 2, 3], &base).unwrap();
    assert_eq!(rows.len(), 12);
    let again = fpc_sensitivity_sweep(&q, &[1, 3], &[2, 8], &[1, 2, 3], &base).unwrap();
    assert_eq!(rows, again);
    let s = summarize(&rows);
    assert_eq!(s.iter().map(|r| (r.k, r.p, r.n_params)).collect::<Vec<_>>(), vec![(1, 2, 2), (1, 8, 2), (3, 2, 6), (3, 8, 6)]);
}

#[test]
fn noisy_transfer_reports_both_sides() {
    let q = instance(6);
    let res = optimize(&to_ising(&q), &QaoaConfig { k: 2, p: 2, ..Default::default() }, &mut rng::seeded(6)).unwrap();
    let rep = warm_start_transfer(&q, &res, NoiseModel::new(0.001, 0.02).unwrap(), 500, 10, &mut rng::seeded(6)).unwrap();
    assert_eq!(rep.recommended, rep.sim.quality.unwrap() >= TRANSFER_THRESHOLD);
    assert!(rep.noisy.quality.is_some());
}
