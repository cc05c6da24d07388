//! Parallel against sequential enumeration.
//!
//! The `par` arm runs on the global rayon pool, the `seq` arm inside a
//! one-thread pool, so both time the same code path. Build with
//! `--no-default-features` to time the plain-iterator fallback instead.

use std::hint::black_box;

use coreg::lctsets::{lct0_enumerate, lct1_enumerate, p1_oracle, Lct1Options};
use coreg::setalg::{CoeffSet, EnumBounds};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn arms(c: &mut Criterion, group: &str, work: impl Fn() + Sync) {
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("one-thread pool");
    let mut g = c.benchmark_group(group);
    g.sample_size(10);
    let par_label = if coreg::par::is_parallel() { "par" } else { "par-disabled" };
    g.bench_function(BenchmarkId::from_parameter(par_label), |b| b.iter(&work));
    g.bench_function(BenchmarkId::from_parameter("seq"), |b| b.iter(|| single.install(&work)));
    g.finish();
}

fn enumeration(c: &mut Criterion) {
    let i: CoeffSet = "1/3,2/5".parse().unwrap();
    let j: CoeffSet = "1/2,1".parse().unwrap();

    let b: EnumBounds = "terms=4,index=6,value=40".parse().unwrap();
    arms(c, "lct0_enumerate", || {
        black_box(lct0_enumerate(&i, &j, &b).unwrap());
    });

    let b: EnumBounds = "terms=4,index=5,value=4".parse().unwrap();
    arms(c, "p1_oracle_degree1", || {
        black_box(p1_oracle(&i, &j, 1, &b, true).unwrap());
    });

    let b: EnumBounds = "terms=4,index=4,value=3".parse().unwrap();
    arms(c, "lct1_enumerate", || {
        black_box(lct1_enumerate(&i, &j, &b, Lct1Options::default()).unwrap());
    });
}

criterion_group!(benches, enumeration);
criterion_main!(benches);
