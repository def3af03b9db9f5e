//! Hand-derived values compared against the library.

use std::f64::consts::PI;

use wrast::ast::{analytic_signal_1d, ast_spectral, hilbert_spectral, ComplexPoint};
use wrast::quad::gauss_legendre;
use wrast::wave::{
    default_p_axis, ez_norm_sq, n_s, plus_kernel, reproducing_kernel, wavelet_ez, Atom, AtomKind, AtomSolution,
    EuclideanPoint,
};
use wrast::window::{admissibility_constant, normalization_constant, DEFAULT_TOL};
use wrast::{builtin_window, dft, Axis, Grid, SampledSignal, C64};

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(f64::MIN_POSITIVE)
}

fn fine_p() -> Grid {
    Grid::from_axis(default_p_axis(12.0, 2e-4).unwrap())
}

#[test]
fn c_h_of_gaussian_derivatives() {
    // ∫ξ²e^{-2πξ²}dξ/|ξ| = 1/(2π), ∫ξ⁴e^{-2πξ²}dξ/|ξ| = 1/(4π²)
    for (name, want) in [("gauss-deriv-1", 0.5 / PI), ("gauss-d2", 0.25 / (PI * PI))] {
        let c = admissibility_constant(&builtin_window(name).unwrap(), DEFAULT_TOL).unwrap();
        let got = c.c_h.finite().unwrap();
        assert!(close(got, want, 1e-8), "{name}: {got} vs {want}");
    }
}

#[test]
fn normalization_in_low_dimensions() {
    // N = Γ(n/2)/(π^{n/2} c_h) with c_h = 1/(2π): N₁ = 2π, N₂ = 2, N₃ = 1.
    let h = builtin_window("gauss-deriv-1").unwrap();
    for (n, want) in [(1, 2.0 * PI), (2, 2.0), (3, 1.0)] {
        let got = normalization_constant(&h, n).unwrap();
        assert!(close(got, want, 1e-8), "n = {n}: {got}");
    }
}

#[test]
fn ast_window_is_inadmissible() {
    let c = admissibility_constant(&builtin_window("ast").unwrap(), DEFAULT_TOL).unwrap();
    assert!(c.c_h.is_infinite());
    assert!(!c.admissible);
}

#[test]
fn n_s_by_factorials() {
    for s in 1..=8 {
        let want = (4.0 * PI).powi(s as i32) / factorial(s - 1);
        assert!(close(n_s(s).unwrap(), want, 1e-13), "s = {s}");
    }
    assert!(n_s(0).is_err());
}

#[test]
fn wavelet_norm_by_factorials_and_quadrature() {
    for s in 0..=4 {
        for t in [0.25, 1.0, -2.0_f64] {
            let want = 2.0 * factorial(s) / (4.0 * PI * t.abs()).powi(s as i32 + 1);
            assert!(close(ez_norm_sq(s, t), want, 1e-13));
            if s > 0 {
                let e = wavelet_ez(s, EuclideanPoint::new(0.3, t), &fine_p()).unwrap();
                assert!(close(e.sobolev_norm_sq(), want, 1e-5), "s = {s}, t′ = {t}");
            }
        }
    }
}

#[test]
fn kernel_diagonal_is_the_wavelet_norm() {
    for s in 1..=3 {
        let z = EuclideanPoint::new(-0.7, 0.8);
        let k = reproducing_kernel(s, z, z).unwrap();
        assert!(close(k.re, ez_norm_sq(s, 0.8), 1e-13));
        assert_eq!(k.im, 0.0);
    }
}

#[test]
fn kernel_matches_spectral_inner_product() {
    let p = fine_p();
    for s in 1..=3 {
        let z1 = EuclideanPoint::new(0.0, 1.0);
        let z2 = EuclideanPoint::new(1.2, 0.4);
        let a = wavelet_ez(s, z1, &p).unwrap();
        let b = wavelet_ez(s, z2, &p).unwrap();
        let spectral = a.inner(&b).unwrap();
        let k = reproducing_kernel(s, z1, z2).unwrap();
        assert!((spectral - k).norm() <= 1e-5 * k.norm(), "s = {s}: {spectral} vs {k}");
        // The − half is the mirrored conjugate of the + half.
        assert!(close(k.re, 2.0 * plus_kernel(s, z1, z2).re, 1e-12));
    }
}

#[test]
fn kernel_vanishes_across_the_real_axis() {
    let k = reproducing_kernel(2, EuclideanPoint::new(0.0, 1.0), EuclideanPoint::new(0.0, -1.0)).unwrap();
    assert_eq!(k, C64::default());
}

#[test]
fn atom_norm_matches_sampled_solution() {
    let atoms = vec![
        Atom { coeff: C64::new(1.0, 0.5), z: EuclideanPoint::new(0.0, 1.0) },
        Atom { coeff: C64::new(-0.3, 0.2), z: EuclideanPoint::new(1.5, 0.6) },
    ];
    for kind in [AtomKind::Full, AtomKind::Plus] {
        let f = AtomSolution::new(2, kind, atoms.clone()).unwrap();
        let sampled = f.to_solution(&fine_p()).unwrap().sobolev_norm_sq();
        assert!(close(sampled, f.norm_sq(), 1e-5), "{kind:?}");
    }
}

#[test]
fn gaussian_is_its_own_transform() {
    let g = Grid::cube(Axis::new(128, 0.1, -6.4).unwrap(), 1).unwrap();
    let f = SampledSignal::from_fn(g, |x| C64::new((-PI * x[0] * x[0]).exp(), 0.0)).unwrap();
    let spec = dft(&f).unwrap();
    for (k, v) in spec.values.iter().enumerate() {
        let p = spec.grid.point(k)[0];
        assert!((v - C64::new((-PI * p * p).exp(), 0.0)).norm() < 1e-10, "p = {p}");
    }
}

fn periodic_mode(k: f64) -> (SampledSignal, f64) {
    let g = Grid::cube(Axis::new(64, 0.125, -4.0).unwrap(), 1).unwrap();
    let nu = k / 8.0;
    (SampledSignal::from_fn(g, |x| C64::from_polar(1.0, 2.0 * PI * nu * x[0])).unwrap(), nu)
}

#[test]
fn hilbert_turns_cosine_into_sine() {
    let g = Grid::cube(Axis::new(64, 0.125, -4.0).unwrap(), 1).unwrap();
    let nu = 3.0 / 8.0;
    let f = SampledSignal::from_fn(g.clone(), |x| C64::new((2.0 * PI * nu * x[0]).cos(), 0.0)).unwrap();
    let h = hilbert_spectral(&f, &[1.0]).unwrap();
    for (k, v) in h.values.iter().enumerate() {
        let x = g.point(k)[0];
        assert!((v - C64::new((2.0 * PI * nu * x).sin(), 0.0)).norm() < 1e-12);
    }
    let back = hilbert_spectral(&f, &[-1.0]).unwrap();
    assert!(back.add(&h).unwrap().max_abs() < 1e-12);
}

#[test]
fn ast_of_a_plane_wave() {
    // f = e^{2πiνx}: f̃(x + iy) = θ(νy) e^{2πiν(x + iy)}.
    let (f, nu) = periodic_mode(3.0);
    let pts = vec![
        ComplexPoint::new(vec![0.3], vec![0.2]),
        ComplexPoint::new(vec![-1.1], vec![-0.4]),
        ComplexPoint::new(vec![0.5], vec![0.0]),
    ];
    let ast = ast_spectral(&f, &pts).unwrap();
    let exact = |x: f64, y: f64| {
        let th = if nu * y > 0.0 { 1.0 } else if nu * y < 0.0 { 0.0 } else { 0.5 };
        th * (C64::new(0.0, 2.0 * PI * nu) * C64::new(x, y)).exp()
    };
    for (pt, v) in ast.points.iter().zip(&ast.values) {
        let e = exact(pt.x[0], pt.y[0]);
        assert!((v - e).norm() < 1e-12, "{pt:?}: {v} vs {e}");
    }
}

#[test]
fn analytic_parts_sum_to_signal() {
    let (f, _) = periodic_mode(-5.0);
    let (plus, minus) = analytic_signal_1d(&f).unwrap();
    assert!(plus.max_abs() < 1e-12);
    assert!(minus.rel_l2_error(&f) < 1e-12);
}

#[test]
fn gauss_legendre_integrates_polynomials_exactly() {
    let (x, w) = gauss_legendre(6);
    for k in 0..12 {
        let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
        let want = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
        assert!((got - want).abs() < 1e-14, "x^{k}");
    }
}
