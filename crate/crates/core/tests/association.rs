use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use quantum_autonomy::mtda::*;
use quantum_autonomy::rng;
use quantum_autonomy::solvers::*;
use rand::Rng;

// Miss and false-alarm costs stay on the scale of the gated costs, as the
// default builder sets them; the 1.5·max|c| penalty is only sufficient there.
fn random_costs(r: &mut impl Rng, n: usize, m: usize) -> CostMatrix {
    let rows: Vec<Vec<Option<f64>>> = (0..n)
        .map(|_| (0..m).map(|_| (r.random::<f64>() < 0.85).then(|| r.random_range(0.0..10.0))).collect())
        .collect();
    let cm = CostMatrix::from_gated_rows(&rows, 0.0, 0.0).unwrap();
    let scale = if cm.max_abs_cost() > 0.0 { cm.max_abs_cost() } else { 1.0 };
    let (c_miss, c_fa) = (r.random_range(0.1..1.0) * scale, r.random_range(0.1..1.0) * scale);
    cm.with_miss_fa(c_miss, c_fa)
}

#[test]
fn qubo_minimiser_matches_hungarian() {
    let mut r = rng::seeded(42);
    for _ in 0..500 {
        let (n, m) = (r.random_range(1..=3), r.random_range(1..=3));
        let cm = random_costs(&mut r, n, m);
        let q = build_qubo(&cm, None).unwrap();
        assert!(q.n_var() <= 15);
        let (idx, _) = brute_force_qubo(&q).unwrap();
        let y = q.bits_of_index(idx);
        assert!(q.is_feasible(&y));
        let h = hungarian_solve(&cm).unwrap();
        assert_abs_diff_eq!(objective_part(&q, &cm, &y), h.objective, epsilon = 1e-9);
        assert!(gnn_solve(&cm).unwrap().objective >= h.objective - 1e-9);
    }
}

#[test]
fn ising_energies_agree_everywhere() {
    let mut r = rng::seeded(8);
    for _ in 0..50 {
        let n = r.random_range(2..=14);
        let q: Vec<f64> = (0..n * n).map(|_| r.random_range(-5.0..5.0)).collect();
        let qubo = QuboInstance::from_dense(n, q, r.random_range(-3.0..3.0)).unwrap();
        let ising = to_ising(&qubo);
        for idx in 0..1u64 << n {
            assert_abs_diff_eq!(qubo.energy_of_index(idx), ising.energy_of_index(idx), epsilon = 1e-9);
        }
    }
}

#[test]
fn variable_counts_and_sparsity() {
    for (n, m, want) in [(2, 3, 11), (20, 30, 650)] {
        assert_eq!(n_var_formula(n, m), want);
    }
    assert_eq!(pair_nonzero_formula(10, 15), 3625);
    let cm = CostMatrix::from_rows(&vec![vec![1.0; 15]; 10], 2.0, 2.0).unwrap();
    let q = build_qubo(&cm, None).unwrap();
    assert_eq!(q.n_var(), 175);
    assert!(q.nonzero_count() <= pair_nonzero_formula(10, 15));
}

#[test]
fn triplet_file_round_trip() {
    let mut r = rng::seeded(3);
    let cm = random_costs(&mut r, 2, 3);
    let q = build_qubo(&cm, None).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.txt");
    write_triplets(&q, std::fs::File::create(&path).unwrap()).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split_whitespace().collect();
    assert_eq!(header.len(), 2);
    assert_eq!(header[0], q.n_var().to_string());
    let back = read_triplets(std::io::BufReader::new(std::fs::File::open(&path).unwrap())).unwrap();
    for idx in 0..1u64 << q.n_var() {
        assert_abs_diff_eq!(back.energy_of_index(idx), q.energy_of_index(idx), epsilon = 1e-9);
    }
}

#[test]
fn scenario_file_builds_costs() {
    let s = AssociationScenario {
        tracks: vec![Track::new([0.0, 0.0, 1.0, 0.0], diag(1.0)).unwrap(), Track::new([10.0, 0.0, 0.0, 1.0], diag(1.0)).unwrap()],
        measurements: vec![Measurement::isotropic([0.2, 0.1], 0.25).unwrap(), Measurement::isotropic([9.8, 0.3], 0.25).unwrap()],
        gate: DEFAULT_GATE,
        c_miss: None,
        c_fa: None,
    };
    let back = AssociationScenario::from_json(&s.to_json()).unwrap();
    let cm = back.cost_matrix().unwrap();
    assert_eq!(cm.n_gated(), 2);
    assert_eq!(hungarian_solve(&cm).unwrap().pairs, vec![(0, 0), (1, 1)]);
}

fn diag(v: f64) -> [[f64; 4]; 4] {
    let mut p = [[0.0; 4]; 4];
    for (i, row) in p.iter_mut().enumerate() {
        row[i] = v;
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn feasible_energy_equals_objective(seed in any::<u64>()) {
        let mut r = rng::seeded(seed);
        let cm = random_costs(&mut r, 2, 3);
        let q = build_qubo(&cm, None).unwrap();
        let a = gnn_solve(&cm).unwrap();
        let y = q.encode(&a);
        prop_assert!(q.is_feasible(&y));
        prop_assert!((q.energy(&y).unwrap() - a.objective).abs() < 1e-9);
        prop_assert!((direct_energy(&q, &cm, &y).unwrap() - a.objective).abs() < 1e-9);
        prop_assert_eq!(q.decode(&y, &cm).unwrap(), a);
    }

    #[test]
    fn kalman_update_shrinks_covariance(px in -5.0f64..5.0, zx in -5.0f64..5.0, var in 0.05f64..4.0) {
        let t = Track::new([px, 0.0, 0.0, 0.0], diag(2.0)).unwrap();
        let z = Measurement::isotropic([zx, 0.0], var).unwrap();
        let u = kalman_update(&t, &z).unwrap();
        prop_assert!(u.p[0][0] < t.p[0][0]);
        prop_assert!((u.x[0] - px).abs() <= (zx - px).abs() + 1e-12);
    }
}
