//! Kernel benchmarks: the fast free-space log convolution against the dense
//! double-sum oracle, and the masked 5-point Laplacian.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use splab_core::grid::{build_grid, laplacian_apply, DomainShape, Field};
use splab_core::logkernel::{log_convolve_dense, LogConvolver};
use std::sync::Arc;

fn random_field(n: usize) -> Field {
    let grid = build_grid(DomainShape::Disk, 4.0, n).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xBE6C);
    let values = (0..grid.interior_len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    grid.field_from(values).unwrap()
}

fn bench_convolution(c: &mut Criterion) {
    let mut group = c.benchmark_group("log_convolve");
    for n in [17usize, 33, 65] {
        let u = random_field(n);
        let mut conv = LogConvolver::new(&u.grid);
        conv.convolve(&u); // warm the FFT plan and buffers
        group.bench_with_input(BenchmarkId::new("fast", n), &u, |b, u| {
            b.iter(|| conv.convolve(u))
        });
        if n <= 33 {
            group.bench_with_input(BenchmarkId::new("dense", n), &u, |b, u| {
                b.iter(|| log_convolve_dense(u).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_laplacian(c: &mut Criterion) {
    let mut group = c.benchmark_group("laplacian_apply");
    for n in [33usize, 65, 129] {
        let u = random_field(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &u, |b, u| {
            b.iter(|| laplacian_apply(u))
        });
    }
    group.finish();
}

// keep a build-time check that the planner type stays thread-safe enough to
// share across sweep workers
#[allow(dead_code)]
fn assert_send<T: Send>(_: &T) {}
#[allow(dead_code)]
fn _grid_is_send(g: &Arc<splab_core::Grid>) {
    assert_send(g);
}

criterion_group!(kernels, bench_convolution, bench_laplacian);
criterion_main!(kernels);
