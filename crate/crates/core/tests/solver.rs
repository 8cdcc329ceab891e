mod common;

use common::{tiny_instance, TinyShape};
use proptest::prelude::*;
use satsched_core::formulation::ObjectiveKind;
use satsched_core::solver::{brute_force, greedy, solve_exact, SolveLimits};
use satsched_core::validate::validate;
use satsched_core::windowing::preprocess;
use satsched_core::{generate, GenSpec, PreprocessResult, SchedulingInstance, Style};

const SHAPE: TinyShape = TinyShape {
    max_missions: 8,
    max_resources: 3,
    max_windows_per_mission: 3,
};

fn crowd(n: usize, window_end: f64) -> SchedulingInstance {
    let missions: Vec<String> = (0..n)
        .map(|i| format!(r#"{{"id": "M{i}", "earliest": 0, "latest": 100, "duration": 5, "weight": {}}}"#, i + 2))
        .collect();
    let windows: Vec<String> = (0..n)
        .map(|i| format!(r#"{{"mission": "M{i}", "resource": "R", "begin": 0, "end": {window_end}}}"#))
        .collect();
    SchedulingInstance::from_json(&format!(
        r#"{{"period": {{"begin": 0, "end": 100}},
            "missions": [{}],
            "resources": [{{"id": "R", "max_swing": 0, "swing_rate": 1, "rotation_rate": 1e12, "stabilize": 5}}],
            "windows": [{}]}}"#,
        missions.join(","),
        windows.join(",")
    ))
    .unwrap()
}

#[test]
fn greedy_fills_a_capacity_two_subinterval() {
    let inst = crowd(3, 20.0);
    let prep = preprocess(&inst);
    assert_eq!(prep.subintervals.len(), 1);
    assert_eq!(prep.subintervals[0].capacity, 2);
    let s = greedy(&inst, &prep, ObjectiveKind::Count);
    assert_eq!(s.objective_count, 2);
    assert!(validate(&inst, &s).ok);
    assert_eq!(brute_force(&inst, ObjectiveKind::Count).unwrap().objective_count, 2);
}

#[test]
fn empty_and_single_instances() {
    let single = crowd(1, 20.0);
    let prep = preprocess(&single);
    assert_eq!(greedy(&single, &prep, ObjectiveKind::Weight).objective_count, 1);
    let r = solve_exact(&single, &prep, ObjectiveKind::Weight, SolveLimits::default()).unwrap();
    assert_eq!((r.best_objective, r.proven_optimal), (2, true));

    let empty = SchedulingInstance::from_json(r#"{"period": {"begin": 0, "end": 10}, "missions": [], "resources": [], "windows": []}"#)
        .unwrap();
    let prep = preprocess(&empty);
    let g = greedy(&empty, &prep, ObjectiveKind::Count);
    assert_eq!((g.objective_count, g.objective_weight), (0, 0));
    let r = solve_exact(&empty, &prep, ObjectiveKind::Count, SolveLimits::default()).unwrap();
    assert!(r.proven_optimal && r.best.is_empty() && r.gap == 0.0);
}

#[test]
fn single_thread_runs_repeat_exactly() {
    let inst = generate(&GenSpec::new(Style::M, 14, 1, 86_400.0, 5));
    let prep = preprocess(&inst);
    let limits = SolveLimits {
        node_limit: Some(5_000),
        ..SolveLimits::default()
    };
    let mut a = solve_exact(&inst, &prep, ObjectiveKind::Weight, limits).unwrap();
    let mut b = solve_exact(&inst, &prep, ObjectiveKind::Weight, limits).unwrap();
    a.elapsed = 0.0;
    b.elapsed = 0.0;
    assert_eq!(a, b);
}

#[test]
fn thread_count_does_not_change_the_optimum() {
    for seed in 0..6 {
        let inst = generate(&GenSpec::new(Style::M, 10, 2, 86_400.0, seed));
        let prep = preprocess(&inst);
        let one = solve_exact(&inst, &prep, ObjectiveKind::Weight, SolveLimits::default()).unwrap();
        let four = solve_exact(&inst, &prep, ObjectiveKind::Weight, SolveLimits { threads: 4, ..SolveLimits::default() }).unwrap();
        assert!(one.proven_optimal && four.proven_optimal);
        assert_eq!((one.best_objective, one.upper_bound), (four.best_objective, four.upper_bound));
    }
}

#[test]
fn stopped_search_reports_a_consistent_gap() {
    let inst = generate(&GenSpec::new(Style::M, 60, 2, 86_400.0, 11));
    let prep = preprocess(&inst);
    let limits = SolveLimits {
        node_limit: Some(200),
        ..SolveLimits::default()
    };
    let r = solve_exact(&inst, &prep, ObjectiveKind::Weight, limits).unwrap();
    assert!(r.nodes <= 200);
    assert!(r.root_bound >= r.upper_bound && r.upper_bound >= r.best_objective);
    let gap = (r.upper_bound - r.best_objective) as f64 / r.upper_bound as f64;
    assert!((r.gap - gap).abs() < 1e-12);
    assert_eq!(r.proven_optimal, r.gap == 0.0);
    assert!(validate(&inst, &r.best).ok);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_solver_output_validates(seed in any::<u64>()) {
        let inst = tiny_instance(seed, SHAPE);
        let prep = preprocess(&inst);
        for objective in [ObjectiveKind::Count, ObjectiveKind::Weight] {
            let g = greedy(&inst, &prep, objective);
            let e = solve_exact(&inst, &prep, objective, SolveLimits::default()).unwrap();
            let b = brute_force(&inst, objective).unwrap();
            for s in [&g, &e.best, &b] {
                let report = validate(&inst, s);
                prop_assert!(report.ok, "{:?}", report.findings);
            }
            let value = |s: &satsched_core::Schedule| match objective {
                ObjectiveKind::Count => s.objective_count,
                ObjectiveKind::Weight => s.objective_weight,
            };
            prop_assert!(value(&b) >= value(&g));
            prop_assert_eq!(value(&b), e.best_objective);
            prop_assert!(e.root_bound >= e.best_objective);
        }
    }

    #[test]
    fn preprocessing_keeps_the_optimum(seed in any::<u64>()) {
        let inst = tiny_instance(seed, SHAPE);
        let with = solve_exact(&inst, &preprocess(&inst), ObjectiveKind::Weight, SolveLimits::default()).unwrap();
        let without =
            solve_exact(&inst, &PreprocessResult::identity(&inst), ObjectiveKind::Weight, SolveLimits::default()).unwrap();
        prop_assert_eq!(with.best_objective, without.best_objective);
    }
}
