use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gp_spectrum_core::{
    compute_slice, count_spectrum_in_contour, find_complex_pair, find_mu, simulate_mode, spectrum_oracle,
    timedomain::uniform_grid, Complex64, ExponentialSumKernel, KernelFamily, SolveOptions,
};
use std::hint::black_box;

fn power_law(m: usize) -> ExponentialSumKernel {
    KernelFamily::PowerLaw {
        amplitude: 1.0,
        gamma: 2.0,
        c: 1.0,
        beta: 1.0,
    }
    .instantiate(m)
    .unwrap()
}

fn kernel_eval(c: &mut Criterion) {
    let mut group = c.benchmark_group("laplace");
    for m in [10, 100, 1000] {
        let k = power_law(m);
        let z = Complex64::new(-0.3, 2.5);
        group.bench_with_input(BenchmarkId::from_parameter(m), &k, |b, k| b.iter(|| k.laplace(black_box(z)).unwrap()));
    }
    group.finish();
}

fn slices(c: &mut Criterion) {
    let opts = SolveOptions::default();
    let mut group = c.benchmark_group("slice");
    for m in [2, 10, 40] {
        let k = power_law(m);
        let ladder = find_mu(&k, m - 1, opts.tol_root).unwrap();
        group.bench_with_input(BenchmarkId::new("n=16", m), &k, |b, k| {
            b.iter(|| compute_slice(k, &ladder, black_box(16), &opts).unwrap())
        });
    }
    group.finish();
}

fn pair_and_oracle(c: &mut Criterion) {
    let k = power_law(12);
    c.bench_function("complex_pair/n=32", |b| b.iter(|| find_complex_pair(&k, black_box(32), 0.25, 1e-10).unwrap()));
    c.bench_function("eig_oracle/M=12", |b| b.iter(|| spectrum_oracle(&k, black_box(32))));
    let k = power_law(10);
    c.bench_function("paper_contour/n=1", |b| b.iter(|| count_spectrum_in_contour(&k, black_box(1)).unwrap()));
}

fn simulate(c: &mut Criterion) {
    let k = ExponentialSumKernel::new(vec![2.0, 1.0], vec![0.0, 1.0]).unwrap();
    let grid = uniform_grid(20.0, 200).unwrap();
    c.bench_function("simulate/two-term", |b| b.iter(|| simulate_mode(&k, 4, 1.0, black_box(&grid), 1e-9).unwrap()));
}

criterion_group!(benches, kernel_eval, slices, pair_and_oracle, simulate);
criterion_main!(benches);
