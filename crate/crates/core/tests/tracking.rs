use quantum_autonomy::biqae::median;
use quantum_autonomy::solvers::Solver;
use quantum_autonomy::tracking::*;

#[test]
fn crossing_confirms_every_target() {
    let res = run_scenario(&Scenario::preset(ScenarioKind::Crossing), Solver::Hungarian).unwrap();
    assert_eq!((res.ct, res.n_targets), (5, 5));
}

#[test]
fn hungarian_never_worse_than_gnn() {
    for seed in 0..10 {
        for kind in [ScenarioKind::Crossing, ScenarioKind::Clutter, ScenarioKind::Swarm] {
            let res = run_scenario(&Scenario { seed, ..Scenario::preset(kind) }, Solver::Hungarian).unwrap();
            let (mut h, mut g) = (0.0, 0.0);
            for e in &res.steps {
                assert!(e.objective <= e.gnn_objective + 1e-9, "seed {seed} {kind:?} t={}", e.t);
                h += e.objective;
                g += e.gnn_objective;
            }
            assert!(h <= g + 1e-9);
        }
    }
}

#[test]
fn runs_are_deterministic() {
    for solver in [Solver::Hungarian, Solver::Gnn] {
        let s = Scenario { seed: 11, ..Scenario::preset(ScenarioKind::Swarm) };
        let a = run_scenario(&s, solver).unwrap();
        let b = run_scenario(&s, solver).unwrap();
        assert_eq!((a.ct, a.md, a.fa), (b.ct, b.md, b.fa));
        assert_eq!(a.trace(), b.trace());
        assert_eq!(
            serde_json::to_string(&a.trace()).unwrap(),
            serde_json::to_string(&b.trace()).unwrap()
        );
    }
}

#[test]
fn clutter_raises_false_alarms() {
    let fa = |kind| {
        let mut v: Vec<f64> = (0..10)
            .map(|seed| run_scenario(&Scenario { seed, ..Scenario::preset(kind) }, Solver::Hungarian).unwrap().fa as f64)
            .collect();
        median(&mut v)
    };
    assert!(fa(ScenarioKind::Clutter) > fa(ScenarioKind::Crossing));
}

#[test]
fn counters_are_monotone() {
    let res = run_scenario(&Scenario::preset(ScenarioKind::Clutter), Solver::Gnn).unwrap();
    let (mut md, mut fa) = (0, 0);
    for e in &res.steps {
        md += e.md;
        fa += e.fa;
    }
    assert_eq!((md, fa), (res.md, res.fa));
}

#[test]
fn scenario_config_parses() {
    let s: Scenario = serde_json::from_str(
        r#"{"kind":"crossing","n_targets":3,"p_detect":1.0,"clutter_rate":0.0,"meas_std":0.3,
            "n_steps":10,"region":50.0,"process_noise":0.01,"seed":1}"#,
    )
    .unwrap();
    let res = run_scenario(&s, Solver::Hungarian).unwrap();
    assert_eq!((res.ct, res.md, res.fa), (3, 0, 0));
    assert!(serde_json::from_str::<Scenario>(r#"{"kind":"crossing","bogus":1}"#).is_err());
    let bad = Scenario { p_detect: 1.5, ..s };
    assert!(run_scenario(&bad, Solver::Hungarian).is_err());
}
