use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use genent::ed_oracle::xy_ed_sector;
use genent::lmg::{solve, LmgParams};
use genent::operators::{jw_fermion_ops, un_basis};
use genent::purity::relative_purity;
use genent::states::bcs_vector;
use genent::xy_chain::{purity_un_finite, spin_correlators, xy_row, XyParams};

fn xy_analytics(c: &mut Criterion) {
    let mut group = c.benchmark_group("xy");
    for n in [256usize, 1024, 4096] {
        let p = XyParams::new(n, 0.45, 0.5).unwrap();
        group.bench_with_input(BenchmarkId::new("purity_uN", n), &p, |b, p| {
            b.iter(|| purity_un_finite(black_box(p)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("correlators_half_chain", n), &p, |b, p| {
            b.iter(|| spin_correlators(black_box(p), p.n / 2).unwrap())
        });
    }
    group.bench_function("sweep_row_400", |b| {
        b.iter(|| xy_row(1.0, black_box(0.45), 400).unwrap())
    });
    group.finish();
}

fn lmg_solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("lmg");
    for n in [500usize, 2000, 8000] {
        let p = LmgParams::new(n, 2.0, 0.0).unwrap();
        group.bench_with_input(BenchmarkId::new("solve", n), &p, |b, p| {
            b.iter(|| solve(black_box(p)).unwrap())
        });
    }
    group.finish();
}

fn oracle_and_purity(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for n in [8usize, 10, 12] {
        group.bench_with_input(BenchmarkId::new("xy_ed_even_sector", n), &n, |b, &n| {
            b.iter(|| xy_ed_sector(n, black_box(0.45), 0.5, 1).unwrap())
        });
    }
    let un = un_basis(&jw_fermion_ops(10).unwrap()).unwrap();
    let psi = bcs_vector(10, 0.45, 0.5).unwrap();
    group.bench_function("relative_purity_uN_10", |b| {
        b.iter(|| relative_purity(&un, black_box(&psi)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, xy_analytics, lmg_solver, oracle_and_purity);
criterion_main!(benches);
