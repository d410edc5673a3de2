use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spectradiag::{construct_matrix, decide_diagonal, minimal_set, truncate_to_finite, Scalar};
use spectradiag_bench::{flat_pair, staircase_spectrum, two_sided};

fn decide(c: &mut Criterion) {
    let mut group = c.benchmark_group("decide_diagonal");
    let seq = two_sided(Scalar::ratio(1, 3), 8);
    for n in [1usize, 4, 16] {
        let spec = staircase_spectrum(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &spec, |b, spec| {
            b.iter(|| decide_diagonal(black_box(&seq), spec).unwrap())
        });
    }
    group.finish();
}

fn minimal(c: &mut Criterion) {
    let mut group = c.benchmark_group("minimal_set");
    let seq = two_sided(Scalar::ratio(1, 4), 0);
    for n in [2usize, 3, 5] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| minimal_set(black_box(&seq), n).unwrap())
        });
    }
    group.finish();
}

fn truncate(c: &mut Criterion) {
    let seq = two_sided(Scalar::ratio(1, 2), 4);
    let eps = Scalar::ratio(1, 10);
    c.bench_function("truncate_to_finite", |b| b.iter(|| truncate_to_finite(black_box(&seq), &eps).unwrap()));
}

fn witness(c: &mut Criterion) {
    let mut group = c.benchmark_group("construct_matrix");
    for n in [4usize, 16, 64] {
        let (lambda, d) = flat_pair(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| construct_matrix(black_box(&lambda), black_box(&d)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, decide, minimal, truncate, witness);
criterion_main!(benches);
