use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use casimir_plate::checks::curve_grid;
use casimir_plate::quadrature::QuadratureSpec;
use casimir_plate::stress::force_exact_with;
use casimir_plate::Execution;

fn curve(c: &mut Criterion) {
    let spec = QuadratureSpec::default();
    let etas = curve_grid();
    let mut group = c.benchmark_group("force_curve_25");
    group.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| {
                exec.map(&etas, |&e| {
                    force_exact_with(e, &spec, Execution::Sequential).unwrap().f_eta
                })
            })
        });
    }
    group.finish();
}

fn single_eta(c: &mut Criterion) {
    let spec = QuadratureSpec::default();
    let mut group = c.benchmark_group("force_exact_eta_1");
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| force_exact_with(1.0, &spec, exec).unwrap().f_eta)
        });
    }
    group.finish();
}

criterion_group!(benches, curve, single_eta);
criterion_main!(benches);
