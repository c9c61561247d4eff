use bernoulli_minimax::lip::solve_lip_ascent_with;
use bernoulli_minimax::minimax::{equalizer_floor_with, solve_minimax_numeric_with};
use bernoulli_minimax::par::Exec;
use bernoulli_minimax::risk::{worst_case_risk_with, DEFAULT_REFINE_TOL};
use bernoulli_minimax::Decision;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn worst_case(c: &mut Criterion) {
    let mut g = c.benchmark_group("worst_case_risk");
    let d = Decision::new(0.3, 0.65).unwrap();
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, 10_001), &exec, |b, &exec| {
            b.iter(|| worst_case_risk_with(exec, black_box(&d), 10_001, DEFAULT_REFINE_TOL))
        });
    }
    g.finish();
}

fn minimax_numeric(c: &mut Criterion) {
    let mut g = c.benchmark_group("minimax_numeric");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, 101), &exec, |b, &exec| {
            b.iter(|| solve_minimax_numeric_with(exec, black_box(101), 20))
        });
    }
    g.finish();
}

fn equalizer(c: &mut Criterion) {
    let mut g = c.benchmark_group("equalizer_floor");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, 1000), &exec, |b, &exec| {
            b.iter(|| equalizer_floor_with(exec, black_box(1000), 1001))
        });
    }
    g.finish();
}

fn lip_ascent(c: &mut Criterion) {
    let mut g = c.benchmark_group("lip_ascent");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, 51), &exec, |b, &exec| {
            b.iter(|| solve_lip_ascent_with(exec, black_box(51), 4, 0).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, worst_case, minimax_numeric, equalizer, lip_ascent);
criterion_main!(benches);
