use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use fracmp::fracops::{frac_integral_left, MidpointDerivative};
use fracmp::solver::mountain_pass_solve;
use fracmp::{EnergyFunctional, FracOrder, SolverOptions};
use fracmp_bench::{cubic_problem, sample_state};

fn operators(c: &mut Criterion) {
    let mut group = c.benchmark_group("operators");
    let order = FracOrder::new(0.8).unwrap();
    for &n in &[256usize, 1024] {
        let u = sample_state(n);
        let op = MidpointDerivative::new(u.grid(), order);
        group.bench_with_input(BenchmarkId::new("midpoint_apply", n), &n, |b, _| {
            b.iter(|| op.apply(black_box(u.values())))
        });
        group.bench_with_input(BenchmarkId::new("frac_integral", n), &n, |b, _| {
            b.iter(|| frac_integral_left(black_box(&u), order).unwrap())
        });
    }
    group.finish();
}

fn energy(c: &mut Criterion) {
    let mut group = c.benchmark_group("energy");
    for &n in &[256usize, 1024] {
        let problem = cubic_problem(0.8, 3.0, n);
        let functional = EnergyFunctional::new(&problem);
        let u = sample_state(n);
        group.bench_with_input(BenchmarkId::new("energy_and_gradient", n), &n, |b, _| {
            b.iter(|| functional.energy_and_gradient_values(black_box(u.values())))
        });
    }
    group.finish();
}

fn solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("mountain_pass");
    group.sample_size(10);
    for &(alpha, p) in &[(1.0, 2.0), (0.8, 2.0), (0.75, 3.0)] {
        let problem = cubic_problem(alpha, p, 128);
        let opts = SolverOptions::default();
        let label = format!("a{alpha}_p{p}");
        group.bench_function(BenchmarkId::new(label, 128), |b| {
            b.iter(|| mountain_pass_solve(black_box(&problem), &opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, operators, energy, solve);
criterion_main!(benches);
