//! Benchmarks for the hot paths: partition refinement, the 0/1 state
//! search, exhaustive kernel enumeration, the swap relocation loop, and
//! one end-to-end construction.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hkernel_core::generate::{blob_path, cycle_ring, random_colored};
use hkernel_core::{
    constrained_kernel_by_paths, construct_thm55, exhaustive_klh_kernels, min_h_length,
    ClassDigraph, HClassPartition,
};

fn bench_finest_partition(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = blob_path(&mut rng, 8);
    let d = g.digraph;
    c.bench_function("finest_partition/blob_path_8", |b| {
        b.iter(|| HClassPartition::finest(black_box(&d)))
    });
}

fn bench_min_h_length(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let d = random_colored(&mut rng, 30, 120, 4, 0.5);
    let verts: Vec<String> = d.digraph().vertices().map(|v| v.to_string()).collect();
    let (u, v) = (
        verts.first().unwrap().clone(),
        verts.last().unwrap().clone(),
    );
    c.bench_function("min_h_length/random_30v_120a", |b| {
        b.iter(|| min_h_length(black_box(&d), &u, &v))
    });
}

fn bench_exhaustive(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let d = random_colored(&mut rng, 8, 14, 3, 0.5);
    c.bench_function("exhaustive_klh_kernels/8v", |b| {
        b.iter(|| exhaustive_klh_kernels(black_box(&d), 2, 2, 15))
    });
}

fn bench_swap_loop(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let g = cycle_ring(&mut rng, 3);
    c.bench_function("constrained_kernel/cycle_ring", |b| {
        b.iter(|| {
            constrained_kernel_by_paths(
                black_box(&g.digraph),
                &g.partition,
                &g.class_digraph,
                &g.class_kernel,
            )
        })
    });
}

fn bench_construction(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = blob_path(&mut rng, 6);
    let cd = ClassDigraph::build(&g.digraph, &g.partition);
    c.bench_function("construct_thm55/blob_path_6_k3", |b| {
        b.iter(|| construct_thm55(black_box(&g.digraph), &g.partition, &cd, 3))
    });
}

criterion_group!(
    benches,
    bench_finest_partition,
    bench_min_h_length,
    bench_exhaustive,
    bench_swap_loop,
    bench_construction
);
criterion_main!(benches);
