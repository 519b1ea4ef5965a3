use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use casimir_core::bhd::{smeared_r, LoKernel};
use casimir_core::oracle::{sigma_via_numeric_ft, OracleConfig};
use casimir_core::quadrature::QuadratureSpec;
use casimir_core::spectral::{q_kernel, sigma_yy, sigma_yy_diag};
use casimir_core::{CavityGeometry, FieldPoint, TruncationPolicy};

fn kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("q_kernel");
    // small arguments take the series branch
    for u in [1e-3, 0.5, 40.0] {
        group.bench_with_input(BenchmarkId::from_parameter(u), &u, |b, &u| b.iter(|| q_kernel(black_box(u))));
    }
    group.finish();
}

fn densities(c: &mut Criterion) {
    let g = CavityGeometry::unit();
    let w = 2.5 * PI;
    let mut group = c.benchmark_group("sigma_yy_diag");
    for n in [100, 1000, 10_000] {
        let policy = TruncationPolicy::new(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &policy, |b, policy| {
            b.iter(|| sigma_yy_diag(black_box(w), black_box(0.3), &g, policy).unwrap())
        });
    }
    group.finish();

    let p = FieldPoint::new(0.75, 44.0, &g).unwrap();
    let policy = TruncationPolicy::default();
    c.bench_function("sigma_yy/off_diagonal", |b| b.iter(|| sigma_yy(black_box(w), &p, &g, &policy).unwrap()));
    let accelerated = policy.accelerated(true);
    c.bench_function("sigma_yy/accelerated", |b| b.iter(|| sigma_yy(black_box(w), &p, &g, &accelerated).unwrap()));
}

fn detector(c: &mut Criterion) {
    let g = CavityGeometry::unit();
    let p = FieldPoint::new(0.75, 0.0, &g).unwrap();
    let kernel = LoKernel::new(2.0 * PI, 0.02 * PI, 1.0).unwrap();
    let policy = TruncationPolicy::new(200);
    let quad = QuadratureSpec::default();
    c.bench_function("smeared_r/diagonal", |b| b.iter(|| smeared_r(&p, &p, &kernel, &g, &policy, &quad).unwrap()));
}

fn oracle(c: &mut Criterion) {
    let g = CavityGeometry::unit();
    let p = FieldPoint::new(0.5, 0.0, &g).unwrap();
    let policy = TruncationPolicy::default();
    let config = OracleConfig {
        s_max: 40.0,
        ..OracleConfig::default()
    };
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    group.bench_function("sigma_via_numeric_ft", |b| {
        b.iter(|| sigma_via_numeric_ft(black_box(2.5 * PI), &p, &g, &policy, &config).unwrap())
    });
    group.finish();
}

criterion_group!(benches, kernels, densities, detector, oracle);
criterion_main!(benches);
