use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dehnlog_core::free_group::Curve;
use dehnlog_core::johnson::{l_invariant, verify_dehn_twist_formula};
use dehnlog_core::random::{random_homogeneous, rng};
use dehnlog_core::{build_symplectic, parallel, AlgebraContext, GroupWord, Tensor};

fn dense(ctx: AlgebraContext, seed: u64) -> Tensor {
    let mut r = rng(seed);
    (1..=4).fold(Tensor::zero(ctx), |acc, d| &acc + &random_homogeneous(&mut r, ctx, d, 60))
}

fn multiply(c: &mut Criterion) {
    let ctx = AlgebraContext::new(3, 8).unwrap();
    let (x, y) = (dense(ctx, 1), dense(ctx, 2));
    let mut group = c.benchmark_group("multiply");
    group.bench_function(BenchmarkId::new("seq", "g3_n8"), |b| b.iter(|| black_box(x.mul_sequential(&y))));
    #[cfg(feature = "parallel")]
    group.bench_function(BenchmarkId::new("rayon", "g3_n8"), |b| b.iter(|| black_box(x.mul_parallel(&y))));
    group.finish();
}

fn derivation_apply(c: &mut Criterion) {
    let theta = build_symplectic(2, 6, None).unwrap();
    let d = l_invariant(&theta, &GroupWord::alpha(2, 1));
    let t = theta.evaluate(&GroupWord::parse(2, "a1 b2 A2 b1 a2").unwrap());
    let mut group = c.benchmark_group("derivation_apply");
    group.bench_function(BenchmarkId::new("seq", "g2_n6"), |b| b.iter(|| black_box(d.apply_sequential(&t))));
    #[cfg(feature = "parallel")]
    group.bench_function(BenchmarkId::new("rayon", "g2_n6"), |b| b.iter(|| black_box(d.apply_parallel(&t))));
    group.finish();
}

fn verification_batch(c: &mut Criterion) {
    let theta = build_symplectic(2, 4, None).unwrap();
    let curves: Vec<Curve> = ["nonsep", "sep:1", "conj(beta:1; nonsep)", "conj(alpha:1 beta:1; nonsep)"]
        .iter()
        .map(|s| Curve::parse(2, s).unwrap())
        .collect();
    let check = |c: &Curve| verify_dehn_twist_formula(&theta, c).unwrap().passed();
    let mut group = c.benchmark_group("twist_batch");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("seq", "g2_n4"), |b| {
        b.iter(|| black_box(parallel::map_sequential(&curves, check)))
    });
    group.bench_function(BenchmarkId::new("rayon", "g2_n4"), |b| b.iter(|| black_box(parallel::map(&curves, check))));
    group.finish();
}

criterion_group!(benches, multiply, derivation_apply, verification_batch);
criterion_main!(benches);
