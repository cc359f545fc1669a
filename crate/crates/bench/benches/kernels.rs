use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_rational::BigRational;
use phizeta::arith::Arg;
use phizeta::identities::{build_catalog, find, identity_tolerance, verify};
use phizeta::series::{sum_series, Kind, SeriesSpec};
use phizeta::specfun::{cot_deriv, polygamma, zeta_int};
use phizeta::{Precision, QS5};

fn kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("polygamma");
    for digits in [50u32, 100, 200] {
        let p = Precision::new(digits).unwrap();
        let x = QS5::sqrt5().half();
        g.bench_with_input(BenchmarkId::new("psi3_sqrt5_half", digits), &p, |b, &p| {
            b.iter(|| polygamma(3, Arg::Exact(black_box(x.clone())), p).unwrap())
        });
    }
    g.finish();

    let p = Precision::DEFAULT;
    c.bench_function("zeta_memoized_3_to_40", |b| {
        b.iter(|| (3..40).for_each(|k| {
            black_box(zeta_int(black_box(k), p).unwrap());
        }))
    });
    c.bench_function("cot_deriv_5", |b| {
        let x = QS5::from_ratios(1, 2, -3, 14);
        b.iter(|| cot_deriv(5, Arg::Exact(black_box(x.clone())), p).unwrap())
    });
}

fn series(c: &mut Criterion) {
    let p = Precision::DEFAULT;
    let tol = identity_tolerance(p);
    let mut g = c.benchmark_group("series");
    g.sample_size(10);
    let spec = SeriesSpec::new(Kind::F, 2, 2, BigRational::new((-1).into(), 3.into())).unwrap();
    g.bench_function("sum_F_m2_r2", |b| b.iter(|| sum_series(black_box(&spec), p, &tol, 20_000).unwrap()));
    let cat = build_catalog();
    let slow = find(&cat, "ex-gluacxg").unwrap();
    g.bench_function("verify_slow_ratio_example", |b| b.iter(|| verify(black_box(slow), p, &tol)));
    g.finish();
}

criterion_group!(benches, kernels, series);
criterion_main!(benches);
