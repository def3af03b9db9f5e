use std::f64::consts::PI;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wrast::synth::{bandlimited, gaussian};
use wrast::xray::{
    xray_forward_direct, xray_forward_spectral, xray_plancherel, xray_reconstruct, xray_sweep, VDesign, XRayPoint,
};
use wrast::{builtin_window, Axis, Grid, C64};

/// `∫ (i t e^{-πt²})* e^{-π(x + vt)²} dt = i x v a^{-3/2} e^{-πx²/a}`, `a = 1 + v²`.
fn gaussian_transform(x: f64, v: f64) -> C64 {
    let a = 1.0 + v * v;
    C64::new(0.0, x * v * a.powf(-1.5) * (-PI * x * x / a).exp())
}

fn line() -> Grid {
    Grid::cube(Axis::new(256, 0.1, -12.8).unwrap(), 1).unwrap()
}

#[test]
fn spectral_route_matches_closed_form() {
    let f = gaussian(&line(), &[0.0], 1.0).unwrap();
    let h = builtin_window("gauss-deriv-1").unwrap();
    for v in [0.3, 1.0, -2.0] {
        let g = xray_forward_spectral(&f, &h, &[v]).unwrap();
        for (k, val) in g.values.iter().enumerate() {
            let x = g.grid.point(k)[0];
            assert!((val - gaussian_transform(x, v)).norm() < 1e-10, "v = {v}, x = {x}");
        }
    }
}

#[test]
fn direct_route_matches_closed_form() {
    let f = gaussian(&line(), &[0.0], 1.0).unwrap();
    let h = builtin_window("gauss-deriv-1").unwrap();
    let t = Grid::cube(Axis::new(401, 0.02, -4.0).unwrap(), 1).unwrap();
    let pts: Vec<XRayPoint> = [(0.4, 0.5), (-1.0, 1.5), (2.0, -0.7)]
        .iter()
        .map(|&(x, v)| XRayPoint { x: vec![x], v: vec![v] })
        .collect();
    let field = xray_forward_direct(&f, &h, &pts, &t).unwrap();
    assert!(!field.truncated);
    for (p, val) in field.points.iter().zip(&field.values) {
        let want = gaussian_transform(p.x[0], p.v[0]);
        assert!((val - want).norm() < 1e-9, "{p:?}: {val} vs {want}");
    }
}

#[test]
fn bandlimited_signal_is_recovered_in_2d() {
    let g = Grid::cube(Axis::new(32, 0.2, -3.2).unwrap(), 2).unwrap();
    let f = bandlimited(&g, 0.5, 2.0, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    let h = builtin_window("gauss-deriv-1").unwrap();
    let d = VDesign::default_for(&h, 2, (0.5, 2.0)).unwrap();
    let field = xray_sweep(&f, &h, &d).unwrap();
    let p = xray_plancherel(&field, &h, &f).unwrap();
    assert!(p.rel_error < 1e-3, "{p:?}");
    let r = xray_reconstruct(&field, &h, Some(&f)).unwrap();
    assert!(r.rel_error.unwrap() < 1e-3, "{:?}", r.rel_error);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sweep_is_linear(seed in any::<u64>(), a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let g = Grid::cube(Axis::new(16, 0.25, -2.0).unwrap(), 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f1 = bandlimited(&g, 0.5, 1.5, &mut rng).unwrap();
        let f2 = bandlimited(&g, 0.5, 1.5, &mut rng).unwrap();
        let h = builtin_window("morlet-like").unwrap();
        let d = VDesign::for_band(&h, 2, (0.5, 1.5), 4, 6).unwrap();
        let (ca, cb) = (C64::new(a, 0.0), C64::new(0.0, b));
        let mixed = xray_sweep(&f1.scale(ca).add(&f2.scale(cb)).unwrap(), &h, &d).unwrap();
        let parts = xray_sweep(&f1, &h, &d).unwrap().linear_combination(ca, &xray_sweep(&f2, &h, &d).unwrap(), cb).unwrap();
        for (m, p) in mixed.slices.iter().zip(&parts.slices) {
            prop_assert!(m.rel_l2_error(p) < 1e-12 || p.norm_sq() < 1e-24);
        }
    }
}
