use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tower_core::gf2m::FieldDescriptor;
use tower_core::points::{affine_counts, asymptotics_table, PredecessorTable};
use tower_core::zeta::enumerated_counts;
use tower_core::Execution;

fn chain_counts(c: &mut Criterion) {
    let mut group = c.benchmark_group("affine_counts");
    group.sample_size(10);
    for k in [12u32, 16, 18] {
        for exec in Execution::available() {
            group.bench_with_input(BenchmarkId::new(exec.name(), k), &k, |b, &k| {
                b.iter(|| affine_counts(black_box(6), k, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn predecessor_table(c: &mut Criterion) {
    let mut group = c.benchmark_group("predecessor_table");
    group.sample_size(10);
    let field = FieldDescriptor::new(18, None).unwrap();
    for exec in Execution::available() {
        group.bench_function(exec.name(), |b| b.iter(|| PredecessorTable::new(black_box(field), exec)));
    }
    group.finish();
}

fn level_two_counts(c: &mut Criterion) {
    let mut group = c.benchmark_group("level_two_counts");
    for exec in Execution::available() {
        group.bench_function(exec.name(), |b| b.iter(|| enumerated_counts(2, black_box(14), exec).unwrap()));
    }
    group.finish();
}

fn table(c: &mut Criterion) {
    let mut group = c.benchmark_group("asymptotics_table");
    for exec in Execution::available() {
        group.bench_function(exec.name(), |b| b.iter(|| asymptotics_table(black_box(200), exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, chain_counts, predecessor_table, level_two_counts, table);
criterion_main!(benches);
