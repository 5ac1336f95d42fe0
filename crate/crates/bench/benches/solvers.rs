use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use qfpt_core::lattice::{elliptic_k, invert_laplace_numeric, laplace_pfp};
use qfpt_core::{
    return_kernel_trigsum, solve_exact, solve_volterra, survival_trigsum, InitialState, Partition,
    TightBindingChain, TimeGrid,
};

fn uniform(n: usize, b: i64) -> (TightBindingChain, Partition, InitialState) {
    let chain = TightBindingChain::uniform(n).unwrap();
    let p = Partition::new(&chain, b).unwrap();
    let s = InitialState::new(&chain, &p, 1).unwrap();
    (chain, p, s)
}

fn exact(c: &mut Criterion) {
    let (chain, p, s) = uniform(4, 2);
    c.bench_function("exact 4-site", |b| {
        b.iter(|| solve_exact(black_box(&chain), &p, &s).unwrap())
    });
    let (chain, p, s) = uniform(8, 7);
    c.bench_function("exact 8-site, single doorway at the far end", |b| {
        b.iter(|| solve_exact(black_box(&chain), &p, &s).unwrap())
    });
}

fn volterra(c: &mut Criterion) {
    let (chain, p, s) = uniform(3, 2);
    let survival = survival_trigsum(&chain, &p, &s).unwrap();
    let kernel = return_kernel_trigsum(&chain, &p).unwrap();
    let grid = TimeGrid::new(2.0, 1e-3).unwrap();
    c.bench_function("volterra 3-site, 2000 steps", |b| {
        b.iter(|| solve_volterra(&survival, &kernel, black_box(&grid)).unwrap())
    });
}

fn lattice(c: &mut Criterion) {
    c.bench_function("lattice P_fp inversion at t = 1", |b| {
        b.iter(|| invert_laplace_numeric(|s| laplace_pfp(s).unwrap(), black_box(1.0)).unwrap())
    });
    c.bench_function("elliptic K(-16/9)", |b| {
        b.iter(|| elliptic_k(black_box(-16.0 / 9.0)))
    });
    c.bench_function("lattice P_fp transform", |b| {
        b.iter(|| laplace_pfp(black_box(Complex64::new(1.0, 3.0))).unwrap())
    });
}

criterion_group!(benches, exact, volterra, lattice);
criterion_main!(benches);
