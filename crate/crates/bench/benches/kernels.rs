use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nalgebra::DMatrix;
use std::hint::black_box;

use vecopt_core::newton::faces_at_infinity;
use vecopt_core::pareto::nondominated_filter;
use vecopt_core::poly::PolyMap;
use vecopt_core::rabier::rabier_from_jacobian;
use vecopt_core::sampling::{halton, halton_box};

const DENSE: &str = "(x1 + 2*x2 - x3 + 0.5*x4)^4 - 3*x1*x2*x3*x4 + x1^6\n\
                     x2^5*x3 - x4^3 + (x1 - x2)^3*(x3 + x4)\n\
                     x1^2*x2^2*x3^2 + x4^6 - x1";

fn polynomials(c: &mut Criterion) {
    let f = PolyMap::parse(DENSE, 4).unwrap();
    let pts = halton_box(256, 4, 2.0);
    let mut g = c.benchmark_group("poly");
    g.bench_function("evaluate_256", |b| {
        b.iter(|| pts.iter().map(|x| f.evaluate(black_box(x))[0]).sum::<f64>())
    });
    g.bench_function("jacobian_256", |b| {
        b.iter(|| pts.iter().map(|x| f.jacobian(black_box(x))[(0, 0)]).sum::<f64>())
    });
    g.finish();
}

fn rabier(c: &mut Criterion) {
    let mut g = c.benchmark_group("rabier");
    for (m, n) in [(2, 3), (4, 6), (8, 10)] {
        let j = DMatrix::from_fn(m, n, |r, k| halton(1 + (r * n + k) as u64, 2)[0] * 2.0 - 1.0);
        g.bench_with_input(BenchmarkId::from_parameter(format!("{m}x{n}")), &j, |b, j| {
            b.iter(|| rabier_from_jacobian(black_box(j)).map(|r| r.value))
        });
    }
    g.finish();
}

fn newton(c: &mut Criterion) {
    let mut g = c.benchmark_group("newton");
    g.sample_size(20);
    for (name, text, n) in [
        ("quartic_2d", "x1^4 + x2^4 + x1*x2\nx1^3*x2 + x2^2 + x1", 2),
        ("dense_3d", "x1^4 + x2^4 + x3^4 + x1*x2*x3\nx1^2*x2^3 + x3^5 + x1*x3^2 + x2", 3),
        ("dense_4d", DENSE, 4),
    ] {
        let f = PolyMap::parse(text, n).unwrap();
        g.bench_function(name, |b| b.iter(|| faces_at_infinity(black_box(&f)).map(|cx| cx.faces.len())));
    }
    g.finish();
}

fn dominance(c: &mut Criterion) {
    let mut g = c.benchmark_group("nondominated_filter");
    for (m, count) in [(2, 10_000), (3, 10_000)] {
        // Points near the negative unit sphere give large fronts.
        let pts: Vec<Vec<f64>> = (1..=count as u64)
            .map(|i| {
                let u = halton(i, m);
                let s: f64 = u.iter().sum::<f64>().max(1e-9);
                u.iter().map(|v| 1.0 - v / s + 0.05 * v).collect()
            })
            .collect();
        g.bench_with_input(BenchmarkId::new(format!("m{m}"), count), &pts, |b, pts| {
            b.iter(|| nondominated_filter(black_box(pts)).len())
        });
    }
    g.finish();
}

criterion_group!(benches, polynomials, rabier, newton, dominance);
criterion_main!(benches);
