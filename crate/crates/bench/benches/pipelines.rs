use criterion::{black_box, criterion_group, criterion_main, Criterion};
use trilin::{
    frust_find, integrate_oscillatory, sublevel_measure, BoxRegion, DegenerateBasis, ProjectionTriple, QuadPolicy,
    SublevelMethod,
};
use trilin_bench::{band, default_cutoff, dense_kappa2, ones, x2y};

fn nd_norm(c: &mut Criterion) {
    let basis = DegenerateBasis::build(3, &ProjectionTriple::canonical(2)).unwrap();
    let p = dense_kappa2(3);
    c.bench_function("nd_norm κ=2 d=3", |b| b.iter(|| basis.nd_norm(black_box(&p)).unwrap()));
    c.bench_function("build basis κ=2 d=4", |b| {
        b.iter(|| DegenerateBasis::build(4, &ProjectionTriple::canonical(2)).unwrap())
    });
}

fn integrate(c: &mut Criterion) {
    let eta = default_cutoff(1);
    let p = x2y();
    let policy = QuadPolicy::default();
    let mut group = c.benchmark_group("integrate x²y");
    group.sample_size(10);
    for lambda in [10.0, 1000.0] {
        group.bench_function(format!("λ={lambda}"), |b| {
            b.iter(|| integrate_oscillatory(black_box(lambda), &p, &ones(), &eta, &policy).unwrap())
        });
    }
    group.finish();
}

fn sublevel(c: &mut Criterion) {
    let q = x2y();
    let unit = BoxRegion::unit(2);
    let mut group = c.benchmark_group("sublevel x²y");
    group.sample_size(10);
    group.bench_function("grid 10⁶", |b| {
        b.iter(|| sublevel_measure(&q, &unit, 1e-3, SublevelMethod::Grid, 1_000_000, 0).unwrap())
    });
    group.bench_function("monte carlo 10⁶", |b| {
        b.iter(|| sublevel_measure(&q, &unit, 1e-3, SublevelMethod::MonteCarlo, 1_000_000, 1).unwrap())
    });
    group.finish();
}

fn frust(c: &mut Criterion) {
    let (e, f) = band(512, 0.25);
    c.bench_function("frust_find band n=512", |b| {
        b.iter(|| frust_find(black_box(&e), &f, &f, 0.25).unwrap())
    });
}

criterion_group!(benches, nd_norm, integrate, sublevel, frust);
criterion_main!(benches);
