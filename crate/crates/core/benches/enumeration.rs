//! Sequential (one-thread pool) against the default rayon pool on the heavy searches.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use wschreier::oracle::brute_force_classify;
use wschreier::wact::classify_extensions;
use wschreier::{Bounds, FiniteMonoid};

type Job = Box<dyn Fn() + Send + Sync>;

fn jobs() -> Vec<(&'static str, Job)> {
    let chain3 = FiniteMonoid::chain(3);
    let s2 = FiniteMonoid::chain(2);
    let c3 = FiniteMonoid::cyclic(3);
    let (a, b) = (chain3.clone(), chain3);
    let (c, d) = (c3, s2.clone());
    vec![
        ("classify chain3 x chain3", Box::new(move || drop(black_box(classify_extensions(&a, &b).unwrap())))),
        ("classify C3 x S2", Box::new(move || drop(black_box(classify_extensions(&c, &d).unwrap())))),
        (
            "brute force S2 x S2",
            Box::new(move || drop(black_box(brute_force_classify(&s2, &s2, &Bounds::default()).unwrap()))),
        ),
    ]
}

#[cfg(feature = "parallel")]
fn bench(c: &mut Criterion) {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    for (name, job) in jobs() {
        let mut group = c.benchmark_group(name);
        group.sample_size(10);
        group.bench_function("sequential", |b| b.iter(|| one.install(&job)));
        group.bench_function("parallel", |b| b.iter(&job));
        group.finish();
    }
}

#[cfg(not(feature = "parallel"))]
fn bench(c: &mut Criterion) {
    for (name, job) in jobs() {
        let mut group = c.benchmark_group(name);
        group.sample_size(10);
        group.bench_function("sequential", |b| b.iter(&job));
        group.finish();
    }
}

criterion_group!(benches, bench);
criterion_main!(benches);
