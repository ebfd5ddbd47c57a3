use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use locclab_bench::{indices, weyl_set, Fixture, EXAMPLES};
use locclab_core::{
    build_protocol, evaluate_protocol, find_witness_basis, gradient, objective, prove_infeasible,
    solve_witness, ComplexVector, SolverConfig,
};

fn objective_and_gradient(c: &mut Criterion) {
    let mut group = c.benchmark_group("objective");
    for (name, d, idx) in EXAMPLES {
        let ss = weyl_set(d, idx);
        let phi = ComplexVector::basis(d, 0);
        group.bench_function(BenchmarkId::new("value", name), |b| {
            b.iter(|| objective(black_box(&phi), &ss).unwrap().f)
        });
        group.bench_function(BenchmarkId::new("gradient", name), |b| {
            b.iter(|| gradient(black_box(&phi), &ss).unwrap())
        });
    }
    group.finish();
}

fn solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_witness");
    group.sample_size(10);
    let cfg = SolverConfig {
        restarts: 16,
        seed: 0,
        max_iters: 2000,
    };
    let cases: [Fixture; 2] = [
        ("feasible_d3", 3, &[(0, 0), (1, 1), (2, 1)]),
        ("infeasible_d4", EXAMPLES[0].1, EXAMPLES[0].2),
    ];
    for (name, d, idx) in cases {
        let ss = weyl_set(d, idx);
        group.bench_function(name, |b| {
            b.iter(|| solve_witness(&ss, &cfg).unwrap().best_f)
        });
    }
    group.finish();
}

fn prover(c: &mut Criterion) {
    let mut group = c.benchmark_group("prove_infeasible");
    for (name, d, idx) in EXAMPLES {
        let v = indices(d, idx);
        group.bench_function(name, |b| {
            b.iter(|| prove_infeasible(black_box(&v)).unwrap())
        });
    }
    group.finish();
}

fn protocol(c: &mut Criterion) {
    let ss = weyl_set(3, &[(0, 0), (1, 1), (2, 1)]);
    let basis = find_witness_basis(&ss, 32, 0).unwrap();
    let p = build_protocol(&ss, &basis).unwrap();
    c.bench_function("evaluate_protocol/d3", |b| {
        b.iter(|| {
            evaluate_protocol(&ss, black_box(&p))
                .unwrap()
                .success_probability
        })
    });
}

criterion_group!(benches, objective_and_gradient, solver, prover, protocol);
criterion_main!(benches);
