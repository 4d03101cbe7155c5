//! Throughput of the data-parallel hot paths.
//!
//! Build with default features for the rayon path and with
//! `--no-default-features` for the sequential fallback; the benchmark ids
//! carry the mode so criterion keeps separate baselines:
//!
//! ```text
//! cargo bench -p losmimo
//! cargo bench -p losmimo --no-default-features
//! ```

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use losmimo::aperture_gain::{realistic_pair_gains, GainConvention, QuadratureRule};
use losmimo::channel::{dual_pol, exact_single_pol, GainModel, XpdModel};
use losmimo::eigencap::{capacity, gram_eigenvalues, waterfill};
use losmimo::geometry::LinkGeometry;
use losmimo::optimizer::{grid_oracle, ApertureObjective, GeometryProblem};

#[cfg(feature = "parallel")]
const MODE: &str = "parallel";
#[cfg(not(feature = "parallel"))]
const MODE: &str = "sequential";

fn bench_channel_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("channel_build");
    for side in [8usize, 16] {
        let link = LinkGeometry::symmetric_optimal(side, side, 0.01, 100.0, 0.005).unwrap();
        group.bench_with_input(
            BenchmarkId::new(MODE, side * side),
            &link,
            |b, link| b.iter(|| exact_single_pol(black_box(link), &GainModel::Isotropic).unwrap()),
        );
    }
    group.finish();
}

fn bench_gram_eigen(c: &mut Criterion) {
    let mut group = c.benchmark_group("gram_eigenvalues");
    group.sample_size(10);
    for side in [8usize, 12] {
        let link = LinkGeometry::symmetric_optimal(side, side, 0.01, 100.0, 0.005).unwrap();
        let h = exact_single_pol(&link, &GainModel::Isotropic).unwrap();
        let d = dual_pol(&h, &XpdModel::from_kappa(0.1).unwrap()).unwrap();
        group.bench_with_input(BenchmarkId::new(MODE, d.dim()), &d, |b, d| {
            b.iter(|| gram_eigenvalues(black_box(d)).unwrap())
        });
    }
    group.finish();
}

fn bench_spacing_sweep(c: &mut Criterion) {
    // Full capacity pipeline over a small spacing grid.
    let mut group = c.benchmark_group("spacing_sweep");
    group.sample_size(10);
    let points = 16usize;
    group.bench_function(BenchmarkId::new(MODE, points), |b| {
        b.iter(|| {
            let mut caps = Vec::with_capacity(points);
            for i in 0..points {
                let delta = 0.2 + 0.3 * i as f64 / (points - 1) as f64;
                let link =
                    LinkGeometry::uniform_spacing(8, 8, 0.01, 100.0, 0.005, delta).unwrap();
                let h = exact_single_pol(&link, &GainModel::Isotropic).unwrap();
                let d = dual_pol(&h, &XpdModel::perfect()).unwrap();
                let spectrum = gram_eigenvalues(&d).unwrap();
                let p = 316.23 / losmimo::channel::channel_gain_far(&link, &GainModel::Isotropic)
                    .unwrap();
                let alloc = waterfill(&spectrum, p, 1.0).unwrap();
                caps.push(capacity(&spectrum, &alloc, 1.0).unwrap().bits_per_use());
            }
            black_box(caps)
        })
    });
    group.finish();
}

fn bench_pair_gains(c: &mut Criterion) {
    let mut group = c.benchmark_group("pair_gains");
    group.sample_size(10);
    let link = LinkGeometry::symmetric_optimal(8, 8, 0.01, 80.0, 0.0282).unwrap();
    group.bench_function(BenchmarkId::new(MODE, 64), |b| {
        b.iter(|| {
            realistic_pair_gains(
                black_box(&link),
                0.0282,
                0.0282,
                GainConvention::ApertureScaled,
                &QuadratureRule::default(),
            )
            .unwrap()
        })
    });
    group.finish();
}

fn bench_grid_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("grid_oracle");
    let problem = GeometryProblem::new(64, 0.01, 100.0, 0.005, ApertureObjective::Length).unwrap();
    group.bench_function(BenchmarkId::new(MODE, "64x101x101"), |b| {
        b.iter(|| grid_oracle(black_box(&problem), 101, 101).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_channel_build,
    bench_gram_eigen,
    bench_spacing_sweep,
    bench_pair_gains,
    bench_grid_oracle
);
criterion_main!(benches);
