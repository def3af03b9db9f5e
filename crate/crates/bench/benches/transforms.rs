use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use wrast::ast::{ast_spectral, hilbert_spectral, ComplexPoint};
use wrast::wave::{euclidean_ast, norm_via_theorem5, XtDesign};
use wrast::xray::{xray_reconstruct, xray_sweep, VDesign};
use wrast::{builtin_window, dft};
use wrast_bench::{packet, plane_points, signal, two_wavelets};

fn xray(c: &mut Criterion) {
    let f = signal(0);
    let h = builtin_window("gauss-deriv-1").unwrap();
    let mut g = c.benchmark_group("xray");
    g.sample_size(10);
    for angles in [8, 32] {
        let d = VDesign::for_band(&h, 2, (0.5, 4.0), 48, angles).unwrap();
        g.bench_with_input(BenchmarkId::new("sweep", d.len()), &d, |b, d| {
            b.iter(|| xray_sweep(black_box(&f), &h, d).unwrap())
        });
        let field = xray_sweep(&f, &h, &d).unwrap();
        g.bench_with_input(BenchmarkId::new("reconstruct", d.len()), &field, |b, field| {
            b.iter(|| xray_reconstruct(black_box(field), &h, None).unwrap())
        });
    }
    g.finish();
}

fn spectral(c: &mut Criterion) {
    let f = signal(1);
    c.bench_function("dft_64x64", |b| b.iter(|| dft(black_box(&f)).unwrap()));
    c.bench_function("hilbert_spectral_64x64", |b| b.iter(|| hilbert_spectral(black_box(&f), &[0.6, 0.8]).unwrap()));
    let pts: Vec<ComplexPoint> =
        (0..64).map(|k| ComplexPoint::new(vec![0.05 * k as f64, 0.0], vec![0.3, 0.1])).collect();
    c.bench_function("ast_spectral_64pts", |b| b.iter(|| ast_spectral(black_box(&f), &pts).unwrap()));
}

fn wave(c: &mut Criterion) {
    let mut g = c.benchmark_group("wave");
    let pts = plane_points(32);
    for count in [256, 1024] {
        let sol = two_wavelets(count);
        g.bench_with_input(BenchmarkId::new("euclidean_ast_1024pts", count), &sol, |b, sol| {
            b.iter(|| euclidean_ast(black_box(sol), &pts))
        });
    }
    let sol = packet();
    let design = XtDesign::for_solution(&sol, 1e-6).unwrap();
    g.sample_size(10);
    g.bench_function("pseudo_local_norm", |b| b.iter(|| norm_via_theorem5(black_box(&sol), &design, 1e-6).unwrap()));
    g.finish();
}

criterion_group!(benches, xray, spectral, wave);
criterion_main!(benches);
