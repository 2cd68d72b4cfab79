use approx::assert_abs_diff_eq;
use quantum_autonomy::mitigation::*;
use quantum_autonomy::rng;
use quantum_autonomy::sim::{Circuit, Gate, NoiseModel};
use rand::Rng;

fn random_circuit(r: &mut impl Rng, n: usize, len: usize) -> Circuit<f64> {
    let mut c = Circuit::new(n);
    for _ in 0..len {
        let q = r.random_range(0..n);
        let g = match r.random_range(0..6) {
            0 => Gate::H(q),
            1 => Gate::ry(q, r.random_range(-3.0..3.0)),
            2 => Gate::rz(q, r.random_range(-3.0..3.0)),
            3 => Gate::rx(q, r.random_range(-3.0..3.0)),
            _ => {
                let p = (q + 1 + r.random_range(0..n - 1)) % n;
                if r.random::<bool>() { Gate::Cz(q, p) } else { Gate::rzz(q, p, r.random_range(-3.0..3.0)) }
            }
        };
        c.push(g).unwrap();
    }
    c
}

#[test]
fn folding_identity_on_random_circuits() {
    let mut r = rng::seeded(42);
    for _ in 0..50 {
        let n = r.random_range(2..=5);
        let c = random_circuit(&mut r, n, 20);
        let base = c.simulate();
        for l in [1, 3, 5] {
            let f = fold(&c, l).unwrap();
            assert_eq!(f.len(), l * c.len());
            assert!(f.simulate().max_abs_diff(&base) < 1e-9);
        }
    }
}

#[test]
fn bell_zne_beats_raw_in_most_seeds() {
    let p = MitigationPipeline::new().with(Stage::linear_zne());
    let seeds: Vec<u64> = (0..20).collect();
    let rows = zne_study(&bell_circuit(), NoiseModel::two_qubit(0.02).unwrap(), 100_000, &p, &seeds).unwrap();
    let wins = rows.iter().filter(|r| r.improved).count();
    assert!(wins >= 14, "{wins}/20");
}

#[test]
fn deep_circuit_degradation_is_reported() {
    let p = MitigationPipeline::new().with(Stage::linear_zne());
    let c = deep_bell_circuit(60);
    let rows = zne_study(&c, NoiseModel::two_qubit(0.05).unwrap(), 2_000, &p, &[1, 2, 3, 4, 5]).unwrap();
    for r in &rows {
        assert!(r.raw.is_finite() && r.mitigated.is_finite());
        assert!(r.raw_error > 0.1);
    }
}

#[test]
fn readout_round_trip_two_qubits() {
    let flips = [ReadoutError::new(0.02, 0.06).unwrap(), ReadoutError::new(0.04, 0.03).unwrap()];
    let a = AssignmentMatrix::from_flips(&flips);
    let truth = [0.5, 0.1, 0.15, 0.25];
    let m = mitigate_frequencies(&a.apply(&truth), &a).unwrap();
    for (x, y) in m.probs.iter().zip(truth) {
        assert_abs_diff_eq!(*x, y, epsilon = 1e-9);
    }
    assert!(!m.clipped);
}

#[test]
fn richardson_orders() {
    let pts = [(1.0, 0.9), (3.0, 0.7), (5.0, 0.5)];
    assert_abs_diff_eq!(richardson_extrapolate(&pts, 1).unwrap(), 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(linear_extrapolate(&pts).unwrap(), 1.0, epsilon = 1e-12);
    assert!(richardson_extrapolate(&pts, 3).is_err());
}

#[test]
fn pipeline_serialises() {
    let p = MitigationPipeline::new()
        .with(Stage::Readout { matrix: AssignmentMatrix::identity(1) })
        .with(Stage::Zne { scales: vec![1, 3, 5], order: 2 });
    let text = serde_json::to_string(&p).unwrap();
    assert_eq!(serde_json::from_str::<MitigationPipeline>(&text).unwrap(), p);
}
