//! Timings for the main kernels: exact mask construction, the zero-coverage
//! oracle, the cascade, ball Fourier transforms and certificate construction.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;
use num_rational::BigRational;
use refspline_core::splinecore::integer_dilation_mask_1d;
use refspline_core::{
    boxspline_ft, cascade_solve, coverage_oracle, decay_probe, erdos_construct, fourier_product_eval, mask_construct,
    multivariate_decide, BoxSplineSpec, Field, FieldElement, RBall,
};

fn sqrt10() -> (Field, FieldElement) {
    let f = Field::new(10, 2).unwrap();
    (f, FieldElement::theta(f))
}

fn el(s: &str, f: Field) -> FieldElement {
    FieldElement::parse(s, f).unwrap()
}

fn masks(c: &mut Criterion) {
    let (f, lam) = sqrt10();
    let mut g = c.benchmark_group("mask_construct");
    for cols in [vec!["1", "t/2"], vec!["1", "t/2", "3", "3/2*t"], vec!["1", "1", "1"]] {
        let dirs: Vec<FieldElement> = cols.iter().map(|s| el(s, f)).collect();
        g.bench_with_input(BenchmarkId::from_parameter(cols.join(";")), &dirs, |b, d| {
            b.iter(|| mask_construct(black_box(d), &lam).unwrap())
        });
    }
    g.finish();

    let dirs = [el("1", f), el("t/2", f), el("3", f)];
    c.bench_function("coverage_oracle/3 columns", |b| b.iter(|| coverage_oracle(black_box(&dirs), &lam, 600).unwrap()));

    let cols = [["1", "0"], ["0", "1"], ["t/2", "0"], ["0", "t/2"]];
    let spec = BoxSplineSpec::new(f, cols.iter().map(|c| vec![el(c[0], f), el(c[1], f)]).collect()).unwrap();
    c.bench_function("multivariate_decide/2d", |b| b.iter(|| multivariate_decide(black_box(&spec), &lam).unwrap()));
}

fn numerics(c: &mut Criterion) {
    let b3 = integer_dilation_mask_1d(&BoxSplineSpec::cardinal(3), 2).unwrap();
    let mut g = c.benchmark_group("cascade_solve");
    g.sample_size(20);
    for n in [1024usize, 4096] {
        g.bench_with_input(BenchmarkId::new("B_3", n), &n, |b, &n| b.iter(|| cascade_solve(&b3, n, 25).unwrap()));
    }
    g.finish();

    let (f, lam) = sqrt10();
    let spec = BoxSplineSpec::univariate(f, &[el("1", f), el("t/2", f)]).unwrap();
    let mask = mask_construct(&spec.directions(), &lam).unwrap().mask().unwrap().clone();
    let w = BigRational::new(BigInt::from(12345), BigInt::from(1024));
    let mut g = c.benchmark_group("fourier");
    for prec in [64u32, 128, 256] {
        let xi = [RBall::from_rational(&w, prec)];
        g.bench_with_input(BenchmarkId::new("boxspline_ft", prec), &prec, |b, &p| {
            b.iter(|| boxspline_ft(&spec, &xi, p).unwrap())
        });
    }
    let wf = FieldElement::from_rational(f, w);
    g.bench_function("fourier_product_eval/J=40", |b| b.iter(|| fourier_product_eval(&mask, &wf, 40, 128).unwrap()));
    g.finish();
}

fn certificates(c: &mut Criterion) {
    let r = Field::RATIONAL;
    let two = FieldElement::from_int(r, 2);
    let zero = [BigRational::from_integer(BigInt::from(0))];
    let mut g = c.benchmark_group("erdos_construct");
    g.sample_size(20);
    for depth in [4u32, 8] {
        g.bench_with_input(BenchmarkId::from_parameter(depth), &depth, |b, &d| {
            b.iter(|| erdos_construct(&two, &zero, d).unwrap())
        });
    }
    g.finish();

    let b0 = integer_dilation_mask_1d(&BoxSplineSpec::cardinal(0), 2).unwrap();
    let mut g = c.benchmark_group("decay_probe");
    g.sample_size(10);
    g.bench_function("B_0/J=200", |b| b.iter(|| decay_probe(&b0, 200).unwrap()));
    g.finish();
}

criterion_group!(benches, masks, numerics, certificates);
criterion_main!(benches);
