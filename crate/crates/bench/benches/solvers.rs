use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pdmosc_core::classical::{self, OrbitSolution};
use pdmosc_core::eigensolve;
use pdmosc_core::model::{AmbiguityTriple, ModelParams};
use pdmosc_core::quantum::{self, QuantumConfig};
use pdmosc_core::specfun;

fn reference() -> QuantumConfig {
    QuantumConfig::new(
        ModelParams::new(1.0, 1.0).unwrap(),
        AmbiguityTriple::new(-0.25, -0.5).unwrap(),
        1.0,
    )
    .unwrap()
}

fn classical_benches(c: &mut Criterion) {
    let p = ModelParams::new(1.0, 1.0).unwrap();
    let mut group = c.benchmark_group("integrate_10_periods");
    for energy in [1.5, 10.0, 50.0] {
        let start = OrbitSolution::new(energy, 0.0, p).unwrap().state(0.0);
        group.bench_with_input(BenchmarkId::from_parameter(energy), &start, |b, s| {
            b.iter(|| classical::integrate(*s, 10.0 * std::f64::consts::PI, 1e-10, &p).unwrap())
        });
    }
    group.finish();
    c.bench_function("period_at_energy", |b| {
        b.iter(|| classical::period_at_energy(black_box(5.0), &p, 1e-10).unwrap())
    });
}

fn eigensolve_benches(c: &mut Criterion) {
    let cfg = reference();
    let mut group = c.benchmark_group("eigensolve_6_levels");
    group.sample_size(20);
    let xi_grid = eigensolve::default_xi_grid(&cfg, 6).unwrap();
    group.bench_function("xi", |b| {
        b.iter(|| eigensolve::solve_xi_space(&cfg, &xi_grid, 6).unwrap())
    });
    let x_grid = eigensolve::default_x_grid(&cfg, 6).unwrap();
    group.bench_function("x", |b| {
        b.iter(|| eigensolve::solve_x_space(&cfg, &x_grid, 6).unwrap())
    });
    group.finish();
    c.bench_function("normalize_n5", |b| {
        b.iter(|| quantum::normalize(black_box(5), &cfg).unwrap())
    });
}

fn specfun_benches(c: &mut Criterion) {
    c.bench_function("kummer_terminating_n20", |b| {
        b.iter(|| specfun::kummer_terminating(20, black_box(2.118), black_box(30.0)).unwrap())
    });
    c.bench_function("kummer_via_laguerre_n20", |b| {
        b.iter(|| specfun::kummer_via_laguerre(20, black_box(2.118), black_box(30.0)).unwrap())
    });
    c.bench_function("gauss_legendre_48", |b| {
        b.iter(|| specfun::gauss_legendre(black_box(48)).unwrap())
    });
}

criterion_group!(
    benches,
    classical_benches,
    eigensolve_benches,
    specfun_benches
);
criterion_main!(benches);
