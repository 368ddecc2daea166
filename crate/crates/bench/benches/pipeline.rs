use calderon_bench::{bench_quadrature, dense_field};
use calderon_core::specfun::{gaunt, TripleIndex};
use calderon_core::{forward_measure, project, reconstruct, PhantomSpec, TruncationSchedule};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn gaunt_bench(c: &mut Criterion) {
    let idx = TripleIndex::new([20, 18, 12], [3, -5, 2]).unwrap();
    c.bench_function("gaunt 20,18,12", |b| b.iter(|| gaunt(black_box(&idx)).unwrap()));
}

fn forward_and_reconstruct(c: &mut Criterion) {
    let caps = [16, 11, 7, 5, 3];
    let field = dense_field(&caps);
    let schedule = TruncationSchedule::new(caps.to_vec()).unwrap();
    c.bench_function("forward_measure 16,11,7,5,3", |b| {
        b.iter(|| forward_measure(black_box(&field), &caps).unwrap())
    });
    let ms = forward_measure(&field, &caps).unwrap();
    c.bench_function("reconstruct 16,11,7,5,3", |b| b.iter(|| reconstruct(black_box(&ms), &schedule).unwrap()));
}

fn projection(c: &mut Criterion) {
    let quad = bench_quadrature();
    let phantom = PhantomSpec::default_gaussian();
    let mut group = c.benchmark_group("project");
    group.sample_size(10);
    group.bench_function("gaussian to ell 16", |b| {
        b.iter(|| project(|p| phantom.eval(p), black_box(&[16, 11, 7, 5, 3]), &quad))
    });
    group.finish();
}

criterion_group!(benches, gaunt_bench, forward_and_reconstruct, projection);
criterion_main!(benches);
