use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use quantum_autonomy::pomdp::*;

fn weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.001f64..1.0, n)
}

fn models() -> Vec<PomdpModel<f64>> {
    vec![tiger(), corridor_tiger(), grid(2, 2).unwrap(), grid(3, 1).unwrap(), tiger_with_accuracy(0.6).unwrap()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn update_is_bayes(w in weights(4), m_idx in 0usize..5, a_raw in 0usize..8, o_raw in 0usize..8) {
        let m = &models()[m_idx];
        let b = Belief::from_weights(w[..m.n_states()].to_vec()).unwrap();
        let a = a_raw % m.n_actions();
        let pred = predict(m, &b, a);
        prop_assert!((pred.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let total: f64 = (0..m.n_obs()).map(|o| evidence_probability(m, &b, a, o)).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);

        let o = o_raw % m.n_obs();
        let e = evidence_probability(m, &b, a, o);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&e));
        if e > 1e-12 {
            let (post, pe) = belief_update(m, &b, a, o).unwrap();
            prop_assert!((pe - e).abs() < 1e-15);
            prop_assert!((post.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for s2 in 0..m.n_states() {
                let want = m.observation(a, s2, o) * pred[s2] / e;
                prop_assert!((post[s2] - want).abs() < 1e-12);
                prop_assert!(post[s2] >= 0.0);
            }
        }
    }

    #[test]
    fn hellinger_is_a_bounded_metric(p in weights(4), q in weights(4), r in weights(4)) {
        let p = Belief::from_weights(p).unwrap();
        let q = Belief::from_weights(q).unwrap();
        let r = Belief::from_weights(r).unwrap();
        let pq = hellinger(p.probs(), q.probs()).unwrap();
        prop_assert!((0.0..=1.0).contains(&pq));
        prop_assert!((pq - hellinger(q.probs(), p.probs()).unwrap()).abs() < 1e-15);
        prop_assert!(hellinger(p.probs(), p.probs()).unwrap() < 1e-7);
        let pr = hellinger(p.probs(), r.probs()).unwrap();
        let rq = hellinger(r.probs(), q.probs()).unwrap();
        prop_assert!(pq <= pr + rq + 1e-12);
        prop_assert!(kl_divergence(p.probs(), q.probs()).unwrap() >= -1e-12);
    }

    #[test]
    fn f32_tracks_f64(w0 in 0.01f64..0.99, o in 0usize..2) {
        let b64 = Belief::new(vec![w0, 1.0 - w0]).unwrap();
        let b32 = Belief::new(vec![w0 as f32, 1.0 - w0 as f32]).unwrap();
        let (p64, _) = belief_update(&tiger::<f64>(), &b64, 0, o).unwrap();
        let (p32, _) = belief_update(&tiger::<f32>(), &b32, 0, o).unwrap();
        prop_assert!((p64[0] - f64::from(p32[0])).abs() < 1e-5);
    }
}

#[test]
fn tiger_hear_right_from_skewed_prior() {
    let m = tiger::<f64>();
    let (post, e) = belief_update(&m, &Belief::new(vec![0.97, 0.03]).unwrap(), 0, 1).unwrap();
    assert_abs_diff_eq!(e, 0.171, epsilon = 1e-12);
    assert_abs_diff_eq!(post[0], 0.8509, epsilon = 1e-3);
    assert_abs_diff_eq!(post[1], 0.1491, epsilon = 1e-3);
}

#[test]
fn impossible_observation_is_an_error() {
    let m = tiger::<f64>();
    let certain = tiger_with_accuracy::<f64>(1.0).unwrap();
    assert!(belief_update(&certain, &Belief::point(2, 0), 0, 1).is_err());
    assert!(belief_update(&m, &Belief::uniform(2), 0, 2).is_err());
}

#[test]
fn model_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for m in models() {
        let path = dir.path().join(format!("{}.json", m.name()));
        std::fs::write(&path, m.to_json()).unwrap();
        let back = PomdpModel::<f64>::load(&path).unwrap();
        assert_eq!(back, m);
    }
    assert!(PomdpModel::<f64>::from_json("{\"states\": []}").is_err());
    assert!(PomdpModel::<f64>::load(dir.path().join("missing.json")).is_err());
}

#[test]
fn closed_loop_t8_events_and_resets() {
    let m = tiger::<f64>();
    let trace = run_closed_loop(&m, &[0, 0, 0, 1, 1, 1, 0, 0], &PlannerConfig::default(), &mut ExactUpdater).unwrap();
    let events: Vec<(usize, usize)> = trace.iter().filter(|s| s.action != 0).map(|s| (s.t, s.action)).collect();
    assert_eq!(events, vec![(2, 2), (5, 1)]);
    for s in &trace {
        assert!(s.hellinger < 1e-12);
    }
    assert_eq!(trace[3].prior, vec![0.5, 0.5]);
    assert_eq!(trace[6].prior, vec![0.5, 0.5]);
    assert!(run_closed_loop(&m, &[], &PlannerConfig::default(), &mut ExactUpdater).unwrap().is_empty());
    assert!(run_closed_loop(&m, &[0, 3], &PlannerConfig::default(), &mut ExactUpdater).is_err());
}

#[test]
fn planner_is_deterministic_per_seed() {
    let m = grid::<f64>(3, 3).unwrap();
    let cfg = PlannerConfig::new(2, 16, 7).unwrap();
    let a = run_closed_loop(&m, &[0, 1, 2, 0], &cfg, &mut ExactUpdater).unwrap();
    let b = run_closed_loop(&m, &[0, 1, 2, 0], &cfg, &mut ExactUpdater).unwrap();
    assert_eq!(a, b);
}
