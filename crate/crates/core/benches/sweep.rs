//! Compares fanning a batch of independent runs out across the rayon pool
//! against executing the same batch on one thread. Per-run results are
//! byte-identical either way; only wall time differs.

use criterion::{criterion_group, criterion_main, Criterion};
use manetsim_core::sweep::{run_batch_sequential, SweepAxis, SweepSpec};
use manetsim_core::{SimConfig, Variant};

fn batch_spec() -> SweepSpec {
    SweepSpec {
        base: SimConfig {
            node_count: 49,
            terrain: (750.0, 750.0),
            sim_time_s: 30.0,
            flow_count: 12,
            packet_interval_s: 0.25,
            v_max: 0.0,
            v_min: 0.0,
            protected_window_s: 5.0,
            normal_window_s: 5.0,
            selfish_fraction: 0.2,
            ..SimConfig::default()
        },
        axis: SweepAxis::SelfishFraction(vec![0.0, 0.1, 0.2, 0.3]),
        variants: vec![Variant::Mdsr],
        seeds: vec![1, 2],
    }
}

fn bench_batch(c: &mut Criterion) {
    let spec = batch_spec();
    let mut group = c.benchmark_group("batch-8x49nodes-30s");
    group.sample_size(10);

    #[cfg(feature = "parallel")]
    group.bench_function("parallel", |b| {
        b.iter(|| manetsim_core::sweep::run_batch_parallel(spec.expand()).unwrap())
    });

    group.bench_function("sequential", |b| {
        b.iter(|| run_batch_sequential(spec.expand()).unwrap())
    });

    group.finish();
}

criterion_group!(benches, bench_batch);
criterion_main!(benches);
