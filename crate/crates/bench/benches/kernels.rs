use std::f64::consts::PI;

use chordmean::chordfun::chord_pmean;
use chordmean::curve::{make_ellipse, make_regular_polygon, make_stadium};
use chordmean::search::{tangent_pmean, TangentAngleCurve};
use chordmean::specfun::{bessel_k0, k0_split};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn special_functions(c: &mut Criterion) {
    let xs: Vec<f64> = (0..256).map(|k| 1e-6 * 1.07f64.powi(k)).collect();
    c.bench_function("k0 over 256 log-spaced points", |b| {
        b.iter(|| {
            xs.iter()
                .map(|&x| bessel_k0(black_box(x)).unwrap())
                .sum::<f64>()
        })
    });
    c.bench_function("k0 split at 0.7", |b| {
        b.iter(|| k0_split(black_box(0.7)).unwrap())
    });
}

fn chord_means(c: &mut Criterion) {
    let ellipse = make_ellipse(2.0, 2.0 * PI).unwrap();
    let stadium = make_stadium(0.5).unwrap();
    let hexagon = make_regular_polygon(6, 2.0 * PI).unwrap();
    let mut group = c.benchmark_group("chord p-mean, p = 1.5, u = 2");
    group.bench_function("ellipse", |b| {
        b.iter(|| chord_pmean(&ellipse, 1.5, black_box(2.0), 256).unwrap())
    });
    group.bench_function("stadium", |b| {
        b.iter(|| chord_pmean(&stadium, 1.5, black_box(2.0), 256).unwrap())
    });
    group.bench_function("hexagon", |b| {
        b.iter(|| chord_pmean(&hexagon, 1.5, black_box(2.0), 256).unwrap())
    });
    group.finish();

    let tc = TangentAngleCurve::new(vec![0.0, 0.2, 0.0, 0.05], vec![0.0, -0.1, 0.03, 0.0]).unwrap();
    c.bench_function("tangent-angle p-mean, 4 modes", |b| {
        b.iter(|| tangent_pmean(&tc, 4.0, black_box(PI)))
    });
}

criterion_group!(benches, special_functions, chord_means);
criterion_main!(benches);
