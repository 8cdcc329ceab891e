use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use satsched_bench::fixtures;
use satsched_core::{
    build, greedy, preprocess, solve_exact, write_lp, Formulation, ObjectiveKind, SolveLimits, Style,
};

fn bench_preprocess(c: &mut Criterion) {
    let mut g = c.benchmark_group("preprocess");
    for style in [Style::R, Style::M] {
        for (label, inst) in fixtures(style, &[100, 400], 5) {
            g.bench_with_input(BenchmarkId::from_parameter(label), &inst, |b, inst| b.iter(|| preprocess(inst)));
        }
    }
    g.finish();
}

fn bench_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("build");
    for (label, inst) in fixtures(Style::C, &[100, 200], 5) {
        let prep = preprocess(&inst);
        for formulation in [Formulation::Baseline, Formulation::Improved] {
            g.bench_with_input(BenchmarkId::new(formulation.as_str(), &label), &inst, |b, inst| {
                b.iter(|| {
                    let model = build(formulation, inst, &prep, ObjectiveKind::Weight).unwrap();
                    write_lp(&model).unwrap()
                })
            });
        }
    }
    g.finish();
}

fn bench_solve(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve");
    g.sample_size(10).measurement_time(Duration::from_secs(5));
    let limits = SolveLimits {
        node_limit: Some(20_000),
        ..SolveLimits::default()
    };
    for (label, inst) in fixtures(Style::M, &[40, 120], 3) {
        let prep = preprocess(&inst);
        g.bench_with_input(BenchmarkId::new("greedy", &label), &inst, |b, inst| {
            b.iter(|| greedy(inst, &prep, ObjectiveKind::Weight))
        });
        g.bench_with_input(BenchmarkId::new("exact", &label), &inst, |b, inst| {
            b.iter(|| solve_exact(inst, &prep, ObjectiveKind::Weight, limits).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_preprocess, bench_build, bench_solve);
criterion_main!(benches);
