//! Single-thread pool vs the global rayon pool on the parallel hot paths.
//! The library code is identical in both arms; only the pool differs.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_rational::BigRational;
use rayon::ThreadPoolBuilder;

use zn_complex::construction::{build_w, build_x};
use zn_complex::presentation::{abelian_images, is_sparse, maximal_sparse_subset, standard_zn, StandardStyle};
use zn_complex::sg::{is_delta_sg, PointConfig};

fn grid(side: i64, layers: i64) -> PointConfig {
    let pts: Vec<Vec<i64>> = (0..side)
        .flat_map(|x| (0..side).flat_map(move |y| (0..layers).map(move |z| vec![x, y, z])))
        .collect();
    PointConfig::from_i64(3, &pts).unwrap()
}

fn bench_pools(c: &mut Criterion) {
    let single = ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let threads = rayon::current_num_threads();

    let mut group = c.benchmark_group("delta_sg");
    let half = BigRational::new(1.into(), 2.into());
    for side in [4i64, 6] {
        let v = grid(side, 2);
        group.bench_with_input(BenchmarkId::new("sequential", v.len()), &v, |b, v| {
            b.iter(|| single.install(|| is_delta_sg(v, &half).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new(format!("parallel-{threads}"), v.len()), &v, |b, v| {
            b.iter(|| is_delta_sg(v, &half).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("homology");
    group.sample_size(10);
    let complexes = [("W_8", build_w(8).unwrap().0), ("X_12", build_x(12).unwrap())];
    for (name, cx) in &complexes {
        group.bench_with_input(BenchmarkId::new("sequential", name), cx, |b, cx| {
            b.iter(|| single.install(|| cx.homology_upto(2).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new(format!("parallel-{threads}"), name), cx, |b, cx| {
            b.iter(|| cx.homology_upto(2).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("sparsity");
    for n in [8usize, 14] {
        let p = standard_zn(n, StandardStyle::Intro3);
        let phi = abelian_images(&p).unwrap();
        let all: Vec<usize> = (0..p.relation_count()).collect();
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, _| {
            b.iter(|| {
                single.install(|| {
                    (
                        is_sparse(&p, &phi, &all).unwrap(),
                        maximal_sparse_subset(&p, &phi).unwrap(),
                    )
                })
            })
        });
        group.bench_with_input(BenchmarkId::new(format!("parallel-{threads}"), n), &n, |b, _| {
            b.iter(|| {
                (
                    is_sparse(&p, &phi, &all).unwrap(),
                    maximal_sparse_subset(&p, &phi).unwrap(),
                )
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_pools);
criterion_main!(benches);
