//! Compares the rayon-backed batch path against the sequential fallback on
//! the three workloads that dominate real runs: the Bloch order-relation
//! grid, randomized ensemble scoring, and measure condition checking.
//!
//! Run with `cargo bench -p coherence-core`. The default build enables the
//! `parallel` feature, so `map_indexed` uses the rayon pool while
//! `map_indexed_seq` pins the same closure to one thread.

use coherence_core::bloch::{order_check, BlochVector};
use coherence_core::ensembles::random_ensemble;
use coherence_core::exec::{derive_seed, map_indexed, map_indexed_seq};
use coherence_core::measures::{check_measure, CoherenceMeasure};
use coherence_core::qmat::random_density;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::f64::consts::{PI, TAU};

fn bloch_point(index: usize, side: usize, phis: usize) -> BlochVector {
    let k = index % phis;
    let rest = index / phis;
    let j = rest % side;
    let i = rest / side;
    BlochVector::new(
        i as f64 / (side - 1) as f64,
        PI * j as f64 / (side - 1) as f64,
        TAU * k as f64 / phis as f64,
    )
    .unwrap()
}

fn bench_order_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("order_check_grid_20x20x4");
    let entropy = CoherenceMeasure::entropy();
    let total = 20 * 20 * 4;
    let job = |i: usize| {
        let rec = order_check(&entropy, &bloch_point(i, 20, 4)).unwrap();
        rec.relations_8_ok && rec.relations_9_ok
    };
    group.bench_function(BenchmarkId::from_parameter("parallel"), |b| {
        b.iter(|| map_indexed(total, job).iter().filter(|ok| **ok).count())
    });
    group.bench_function(BenchmarkId::from_parameter("sequential"), |b| {
        b.iter(|| map_indexed_seq(total, job).iter().filter(|ok| **ok).count())
    });
    group.finish();
}

fn bench_random_ensembles(c: &mut Criterion) {
    let mut group = c.benchmark_group("random_ensemble_scoring_d3");
    let l1 = CoherenceMeasure::l1();
    let states: Vec<_> = (0..16).map(|s| random_density(3, s)).collect();
    let job = |i: usize| {
        let rho = &states[i % states.len()];
        let ens = random_ensemble(rho, 9, derive_seed(7, i as u64)).unwrap();
        ens.average_coherence(&l1).unwrap()
    };
    group.bench_function(BenchmarkId::from_parameter("parallel"), |b| {
        b.iter(|| map_indexed(256, job).iter().sum::<f64>())
    });
    group.bench_function(BenchmarkId::from_parameter("sequential"), |b| {
        b.iter(|| map_indexed_seq(256, job).iter().sum::<f64>())
    });
    group.finish();
}

fn bench_check_measure(c: &mut Criterion) {
    // check_measure parallelizes internally through map_indexed, so the
    // sequential twin is emulated by chunking trials through map_indexed_seq.
    let mut group = c.benchmark_group("check_measure_entropy_20k");
    let entropy = CoherenceMeasure::entropy();
    group.bench_function(BenchmarkId::from_parameter("parallel"), |b| {
        b.iter(|| check_measure(&entropy, 4, 20_000, 3).worst_concavity_violation)
    });
    group.bench_function(BenchmarkId::from_parameter("sequential"), |b| {
        b.iter(|| {
            map_indexed_seq(20, |chunk| {
                check_measure(&entropy, 4, 1_000, derive_seed(3, chunk as u64))
                    .worst_concavity_violation
            })
            .iter()
            .fold(0.0_f64, |a, &b| a.max(b))
        })
    });
    group.finish();
}

criterion_group!(benches, bench_order_grid, bench_random_ensembles, bench_check_measure);
criterion_main!(benches);
