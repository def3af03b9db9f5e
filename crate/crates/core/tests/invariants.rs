use std::io::Cursor;

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wrast::ast::analytic_signal_1d;
use wrast::wave::{
    apply, default_p_axis, gram_matrix, min_eigenvalue, mobius, random_solution, reproducing_kernel, EuclideanPoint,
    Sl2Element, Symmetry, WaveSolution,
};
use wrast::wrs::{read_all, solution_from_records, solution_records, write_record, Record};
use wrast::{dft, idft, Axis, Grid, SampledSignal};

fn sol(seed: u64, s: u32) -> WaveSolution {
    random_solution(default_p_axis(6.0, 1.0 / 32.0).unwrap(), s, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn signal(values: Vec<(f64, f64)>) -> SampledSignal {
    let g = Grid::cube(Axis::new(values.len(), 0.25, -2.0).unwrap(), 1).unwrap();
    SampledSignal::new(g, values.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap()
}

fn sl2() -> impl Strategy<Value = Sl2Element> {
    (0.3..3.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b, c)| Sl2Element::new(a, b, c, (1.0 + b * c) / a).unwrap())
}

fn upper_point() -> impl Strategy<Value = C64> {
    (-3.0..3.0f64, 0.05..3.0f64).prop_map(|(x, y)| C64::new(x, y))
}

fn euclid() -> impl Strategy<Value = EuclideanPoint> {
    (-3.0..3.0f64, 0.1..2.0f64, any::<bool>()).prop_map(|(x, t, neg)| EuclideanPoint::new(x, if neg { -t } else { t }))
}

proptest! {
    #[test]
    fn mobius_scales_imaginary_part(g in sl2(), z in upper_point()) {
        let w = mobius(&g, z).finite().unwrap();
        let den = (g.c * z + g.d).norm_sqr();
        prop_assert!((w.im - z.im / den).abs() <= 1e-10 * (1.0 + w.im.abs()));
        prop_assert!(w.im > 0.0);
    }

    #[test]
    fn mobius_is_an_action(g in sl2(), h in sl2(), z in upper_point()) {
        let direct = mobius(&g.compose(&h), z).finite().unwrap();
        let nested = mobius(&g, mobius(&h, z).finite().unwrap()).finite().unwrap();
        prop_assert!((direct - nested).norm() <= 1e-8 * (1.0 + direct.norm()));
        let back = mobius(&g.inverse(), mobius(&g, z).finite().unwrap()).finite().unwrap();
        prop_assert!((back - z).norm() <= 1e-8 * (1.0 + z.norm()));
    }

    #[test]
    fn kernel_is_symmetric(s in 1u32..4, a in euclid(), b in euclid()) {
        let k1 = reproducing_kernel(s, a, b).unwrap();
        let k2 = reproducing_kernel(s, b, a).unwrap();
        prop_assert!((k1 - k2.conj()).norm() <= 1e-12 * (1.0 + k1.norm()));
    }

    #[test]
    fn gram_matrices_are_positive(s in 1u32..4, pts in prop::collection::vec(euclid(), 1..6)) {
        let g = gram_matrix(s, &pts).unwrap();
        let scale = g.diagonal().iter().copied().fold(0.0, f64::max);
        prop_assert!(min_eigenvalue(&g) >= -1e-10 * scale);
    }

    #[test]
    fn exact_symmetries_preserve_the_norm(seed in any::<u64>(), s in 0u32..3, u0 in -3.0..3.0f64, v0 in -3.0..3.0f64) {
        let f = sol(seed, s);
        let n = f.sobolev_norm_sq();
        for op in [Symmetry::Translate { u0, v0 }, Symmetry::Parity, Symmetry::Reflect] {
            let g = apply(&f, op).unwrap();
            prop_assert!((g.sobolev_norm_sq() - n).abs() <= 1e-12 * n, "{:?}", op);
        }
    }

    #[test]
    fn reflections_are_involutions(seed in any::<u64>(), s in 0u32..3) {
        let f = sol(seed, s);
        for op in [Symmetry::Parity, Symmetry::Reflect] {
            prop_assert_eq!(&apply(&apply(&f, op).unwrap(), op).unwrap(), &f);
        }
    }

    #[test]
    fn translations_compose(seed in any::<u64>(), a in -2.0..2.0f64, b in -2.0..2.0f64, c in -2.0..2.0f64, d in -2.0..2.0f64) {
        let f = sol(seed, 1);
        let two = apply(&apply(&f, Symmetry::Translate { u0: a, v0: b }).unwrap(), Symmetry::Translate { u0: c, v0: d }).unwrap();
        let one = apply(&f, Symmetry::Translate { u0: a + c, v0: b + d }).unwrap();
        prop_assert!(two.max_rel_diff(&one).unwrap() < 1e-12);
    }

    #[test]
    fn translation_keeps_inner_products(seed in any::<u64>(), x0 in -2.0..2.0f64, t0 in -2.0..2.0f64) {
        let f = sol(seed, 1);
        let g = sol(seed.wrapping_add(1), 1);
        let op = Symmetry::spacetime(x0, t0);
        let before = f.inner(&g).unwrap();
        let after = apply(&f, op).unwrap().inner(&apply(&g, op).unwrap()).unwrap();
        prop_assert!((before - after).norm() <= 1e-12 * (f.sobolev_norm() * g.sobolev_norm()));
    }

    #[test]
    fn dft_round_trip_and_parseval(values in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 16..48)) {
        let f = signal(values);
        let spec = dft(&f).unwrap();
        prop_assert!((spec.norm_sq() - f.norm_sq()).abs() <= 1e-12 * f.norm_sq().max(1e-300));
        let back = idft(&spec).unwrap();
        prop_assert!(back.rel_l2_error(&f) < 1e-12 || f.norm_sq() == 0.0);
    }

    #[test]
    fn analytic_parts_sum_to_the_signal(values in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 16..48)) {
        let f = signal(values);
        let (plus, minus) = analytic_signal_1d(&f).unwrap();
        let sum = plus.add(&minus).unwrap();
        prop_assert!(sum.rel_l2_error(&f) < 1e-12 || f.norm_sq() == 0.0);
    }

    #[test]
    fn wrs_round_trip(values in prop::collection::vec((any::<f64>(), any::<f64>()), 2..40), tag in "[a-z]{1,8}") {
        let f = signal(values.into_iter().map(|(a, b)| (if a.is_finite() { a } else { 0.0 }, if b.is_finite() { b } else { 0.0 })).collect());
        let rec = Record::new(f.grid.clone(), f.values.clone()).with("tag", tag.clone());
        let mut buf = Vec::new();
        write_record(&mut buf, &rec).unwrap();
        write_record(&mut buf, &rec).unwrap();
        let back = read_all(Cursor::new(buf)).unwrap();
        prop_assert_eq!(back.len(), 2);
        prop_assert_eq!(&back[0], &rec);
        prop_assert_eq!(&back[1].extra["tag"], &serde_json::Value::from(tag));
    }

    #[test]
    fn solutions_round_trip_through_records(seed in any::<u64>(), s in 0u32..4) {
        let f = sol(seed, s);
        let back = solution_from_records(&solution_records(&f), None).unwrap();
        prop_assert_eq!(back, f);
    }
}
