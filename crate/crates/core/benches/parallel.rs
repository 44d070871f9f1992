//! Parallel vs sequential throughput on the crate's data-parallel
//! workloads. Both paths go through `exec`: `indexed_map` dispatches to
//! rayon under the `parallel` feature (the default), `indexed_map_seq`
//! is the plain loop. Outputs are identical by the per-index RNG-stream
//! contract, so the comparison is purely about scheduling.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use seqdisc_core::exec::{indexed_map, indexed_map_seq, stream_rng};
use seqdisc_core::haar::{haar_unitary, haar_unitary_seeded};
use seqdisc_core::simulator::shot_outcome;
use seqdisc_core::verify::{check_subadditivity, subadditivity_trial_pair};
use seqdisc_core::{synthesize_protocol, theta};

fn theta_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("theta_sweep_d3_x256");
    let work = |i: usize| theta(&haar_unitary(3, &mut stream_rng(1, i as u64))).unwrap();
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(indexed_map(256, work)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(indexed_map_seq(256, work)))
    });
    group.finish();
}

fn subadditivity_trials(c: &mut Criterion) {
    let mut group = c.benchmark_group("subadditivity_d3_x256");
    let work = |i: usize| {
        let (u, v) = subadditivity_trial_pair(3, 2, i).unwrap();
        check_subadditivity(&u, &v).unwrap().holds
    };
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(indexed_map(256, work)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(indexed_map_seq(256, work)))
    });
    group.finish();
}

fn shot_sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("shots_x65536");
    let probabilities = [0.5, 0.3, 0.2];
    let work = move |s: usize| shot_outcome(&probabilities, 7, s as u64);
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(indexed_map(65_536, work)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(indexed_map_seq(65_536, work)))
    });
    group.finish();
}

fn protocol_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("synthesize_d3_x64");
    group.sample_size(20);
    let work = |i: usize| {
        let u = haar_unitary_seeded(3, 11, i as u64);
        let v = haar_unitary_seeded(3, 13, i as u64);
        synthesize_protocol(&u, &v).unwrap().orth_defect()
    };
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(indexed_map(64, work)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(indexed_map_seq(64, work)))
    });
    group.finish();
}

criterion_group!(
    benches,
    theta_sweep,
    subadditivity_trials,
    shot_sampling,
    protocol_batch
);
criterion_main!(benches);
