use criterion::{criterion_group, criterion_main, Criterion};
use starnet_core::rates::{curve_point, gap_report, log_grid};
use starnet_core::SnrPoint;
use std::hint::black_box;

fn bench_curve_point(c: &mut Criterion) {
    c.bench_function("curve_point", |b| {
        b.iter(|| curve_point(black_box(SnrPoint::from_linear(3.7))))
    });
}

fn bench_gap_report(c: &mut Criterion) {
    let grid = log_grid(0.01, 1e4, 2001);
    c.bench_function("gap_report_2001", |b| b.iter(|| gap_report(black_box(&grid))));
}

criterion_group!(rates, bench_curve_point, bench_gap_report);
criterion_main!(rates);
