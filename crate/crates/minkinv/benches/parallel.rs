//! Parallel-vs-sequential benchmarks for the data-parallel inner loops:
//! the per-column determinants of the condensed Cramer rule, the quadrature
//! panels of the integral representation, and batch instance generation.
//!
//! Library entry points parallelize with rayon under the default `parallel`
//! feature; each group pairs them with a sequential baseline built from the
//! same public primitives. Running `cargo bench --no-default-features`
//! additionally turns the library paths themselves sequential, so the same
//! bench IDs can be compared across the two builds.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use minkinv::matrix::{power, Matrix, Vector};
use minkinv::representations::{mdmp_integral, QuadratureConfig};
use minkinv::solvers::{build_complement_bases, cramer_solve};
use minkinv::Tolerances;

fn cramer_instance(n: usize) -> (Matrix, Vector) {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xbead);
    let a = minkinv::gen::random_instance(n, 2, &mut rng, &tol).expect("bench instance");
    let b = Vector::from_fn(n, |i, _| minkinv::matrix::cx((i as f64 * 0.37).sin(), 0.0));
    (a, b)
}

fn bench_cramer(c: &mut Criterion) {
    let tol = Tolerances::default();
    let n = 96;
    let (a, b) = cramer_instance(n);

    // shared setup for the sequential baseline: the bordered system the rule
    // solves, assembled from the same public pieces
    let bases = build_complement_bases(&a, &tol).unwrap();
    let wv_inv = (&bases.w * &bases.v).try_inverse().unwrap();
    let e = &bases.v * wv_inv * &bases.w;
    let k = minkinv::decomp::matrix_index(&a, &tol).unwrap();
    let bordered = power(&a, k) + e;
    let m = minkinv::minkowski::minkowski_inverse(&a, &tol).unwrap();
    let rhs = power(&a, k) * (&m * &b);

    let mut group = c.benchmark_group("cramer");
    group.sample_size(10);
    group.bench_function("library", |bch| {
        bch.iter(|| black_box(cramer_solve(&a, &b, Some(&bases), &tol).unwrap()))
    });
    group.bench_function("sequential_determinants", |bch| {
        bch.iter(|| {
            let det0 = bordered.determinant();
            let xs: Vec<_> = (0..n)
                .map(|i| {
                    let mut replaced = bordered.clone();
                    replaced.set_column(i, &rhs);
                    replaced.determinant() / det0
                })
                .collect();
            black_box(xs)
        })
    });
    group.finish();
}

fn bench_integral(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xfeed);
    // canonical family: the integrand spectrum is positive by construction
    let a = minkinv::gen::canonical_stable_instance(48, 24, &mut rng);
    let config = QuadratureConfig {
        panels: 64,
        ..QuadratureConfig::default()
    };

    let mut group = c.benchmark_group("integral");
    group.sample_size(10);
    group.bench_function("quadrature", |bch| {
        bch.iter(|| black_box(mdmp_integral(&a, &config, &tol).unwrap()))
    });
    group.finish();
}

fn bench_instances(c: &mut Criterion) {
    let tol = Tolerances::default();
    let count = 48;
    let seed = 0x5eed;

    let mut group = c.benchmark_group("instance_batch");
    group.sample_size(10);
    group.bench_function("library", |bch| {
        bch.iter(|| black_box(minkinv::gen::instance_set(count, seed, &tol)))
    });
    group.bench_function("sequential_map", |bch| {
        bch.iter(|| {
            let set: Vec<Matrix> = (0..count)
                .map(|i| {
                    let n = 3 + (i % 6);
                    let index = (1 + (i / 6) % 3).min(n - 1);
                    let mut rng = ChaCha8Rng::seed_from_u64(
                        seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(i as u64 + 1)),
                    );
                    minkinv::gen::random_instance(n, index, &mut rng, &tol).unwrap()
                })
                .collect();
            black_box(set)
        })
    });
    group.finish();
}

criterion_group!(benches, bench_cramer, bench_integral, bench_instances);
criterion_main!(benches);
