use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use finosc::elements;
use finosc::multiortho;
use finosc::params::{Dimension, SqueezeCoherentParams};
use finosc::squeezing;
use finosc::su2;

fn params() -> SqueezeCoherentParams {
    SqueezeCoherentParams::new(0.5, 0.2, 0.3, 0.7)
}

fn bench_tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("element_table");
    for n in [8usize, 16, 32] {
        group.bench_with_input(BenchmarkId::new("closed_form", n), &n, |b, &n| {
            let p = params();
            b.iter(|| elements::r_table(black_box(&p), Dimension(n)));
        });
        group.bench_with_input(BenchmarkId::new("oracle", n), &n, |b, &n| {
            let p = params();
            b.iter(|| su2::build_r::<f64>(black_box(&p), Dimension(n)));
        });
    }
    group.finish();
}

fn bench_band_extraction(c: &mut Criterion) {
    c.bench_function("forward_band_n12", |b| {
        let p = params();
        b.iter(|| multiortho::extract_recurrence_band(black_box(&p), Dimension(12)).unwrap());
    });
}

fn bench_sweep(c: &mut Criterion) {
    c.bench_function("squeeze_sweep_n40_grid257", |b| {
        b.iter(|| squeezing::sweep(Dimension(40), black_box(0.8), 2.0, 257).unwrap());
    });
    c.bench_function("kappa_n40", |b| {
        b.iter(|| squeezing::kappa(black_box(2.0), Dimension(40)));
    });
}

criterion_group!(benches, bench_tables, bench_band_extraction, bench_sweep);
criterion_main!(benches);
