//! Executable identity checks at desk-scale grids.
//!
//! Every check returns a [`CheckReport`] with both sides of the identity,
//! the error measure it is judged by and its tolerance; `pass` holds exactly
//! when `rel_error ≤ tol`.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ast::{
    analytic_signal_1d, ast_grid, ast_line_integral, ast_spectral, cr_residual, cr_residual_1d, delta_tilde,
    directional_hilbert, hilbert_eps, hilbert_spectral, hilbert_u_grid, ComplexPoint,
};
use crate::error::{invalid, Error, Result};
use crate::grid::{Axis, Grid};
use crate::radon::{motion_matrix, radon_forward, radon_reconstruct, radon_sweep, rotation2, so_n_quadrature, RigidMotion};
use crate::spectral::{idft, SampledSignal, SpectralSignal};
use crate::synth::bandlimited;
use crate::wave::*;
use crate::window::{admissibility_constant, builtin_window, normalization_constant, rigid_admissibility, DEFAULT_TOL};
use crate::xray::{
    resolution_function, resolution_kernel_check, ring_samples, wavelet_xray,
    xray_forward_direct, xray_forward_spectral, xray_plancherel, xray_reconstruct, xray_sweep, VDesign, XRayPoint,
};

/// A real or complex side of an identity. Non-finite reals are carried as
/// the strings `inf`, `-inf` and `nan`, which JSON cannot hold as numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Real(f64),
    Complex { re: f64, im: f64 },
    NonFinite(String),
}

fn non_finite_name(v: f64) -> &'static str {
    if v.is_nan() {
        "nan"
    } else if v > 0.0 {
        "inf"
    } else {
        "-inf"
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        if v.is_finite() {
            Value::Real(v)
        } else {
            Value::NonFinite(non_finite_name(v).into())
        }
    }
}

impl From<C64> for Value {
    fn from(v: C64) -> Self {
        Value::Complex { re: v.re, im: v.im }
    }
}

/// `f64` fields that may be infinite, with the same string encoding.
mod lenient {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str(super::non_finite_name(*v))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Str(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                _ => Err(serde::de::Error::custom(format!("`{s}` is not a number"))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub lhs: Value,
    pub rhs: Value,
    #[serde(with = "lenient")]
    pub rel_error: f64,
    pub tol: f64,
    pub pass: bool,
    pub runtime_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Parameters shared by the checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Sobolev degree for the degree-generic wave checks.
    pub s: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, s: 1 }
    }
}

/// What a check measures: both sides and the error it is judged by.
struct Outcome {
    lhs: Value,
    rhs: Value,
    err: f64,
}

fn out(lhs: impl Into<Value>, rhs: impl Into<Value>, err: f64) -> Result<Outcome> {
    Ok(Outcome { lhs: lhs.into(), rhs: rhs.into(), err })
}

/// Worst of several outcomes.
fn worst(items: Vec<Outcome>) -> Result<Outcome> {
    items
        .into_iter()
        .max_by(|a, b| a.err.total_cmp(&b.err))
        .ok_or_else(|| Error::Invalid("empty check".into()))
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

fn crel(a: C64, b: C64) -> f64 {
    if b.norm() == 0.0 {
        a.norm()
    } else {
        (a - b).norm() / b.norm()
    }
}

fn flag(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

fn rng(cfg: &SuiteConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(1_000_003).wrapping_add(salt))
}

type CheckFn = fn(&SuiteConfig) -> Result<Outcome>;

struct Check {
    name: &'static str,
    tol: f64,
    run: CheckFn,
}

macro_rules! checks {
    ($($name:literal, $tol:expr, $f:ident;)*) => {
        &[$(Check { name: $name, tol: $tol, run: $f }),*]
    };
}

/// Suites accepted by [`run_suite`].
pub const SUITES: [&str; 6] = ["all", "window", "xray", "radon", "ast", "wave"];

static REGISTRY: &[Check] = checks! {
    "window.ast_inadmissible", 0.0, window_ast_inadmissible;
    "window.ast_half_at_zero", 1e-15, window_ast_half;
    "window.rigid_d1_reduces", 1e-4, window_rigid_d1;
    "xray.dilation", 1e-8, xray_dilation;
    "xray.small_velocity", 1e-3, xray_small_velocity;
    "xray.wavelet_pairing", 1e-8, xray_pairing;
    "xray.translation_covariance", 1e-12, xray_translation;
    "xray.rotation_covariance", 1e-8, xray_rotation;
    "xray.plancherel", 1e-2, xray_plancherel_check;
    "xray.reconstruction", 1e-2, xray_reconstruction;
    "xray.h_deviation", 1e-2, xray_h_deviation;
    "xray.h_rotation_invariance", 1e-10, xray_h_invariance;
    "xray.inadmissible_window", 0.0, xray_inadmissible;
    "radon.d1_velocities", 1e-12, radon_velocities;
    "radon.d1_direct_matches_xray", 1e-10, radon_direct_xray;
    "radon.d1_forward_matches_xray", 1e-6, radon_forward_xray;
    "radon.d1_reconstruction_matches_xray", 1e-6, radon_reconstruct_xray;
    "ast.gabor", 1e-8, ast_gabor;
    "ast.real_parts_conjugate", 1e-12, ast_real_conjugate;
    "ast.zero_direction_half", 1e-10, ast_zero_direction;
    "ast.hardy_vanishing", 1e-10, ast_hardy;
    "ast.line_vs_spectral", 2e-4, ast_line_vs_spectral;
    "ast.cr_directional", 1e-6, ast_cr_directional;
    "ast.cr_1d", 1e-6, ast_cr_1d;
    "ast.hilbert_pv_vs_spectral", 1e-3, ast_hilbert_pv;
    "ast.hilbert_eps_limit", 1e-3, ast_hilbert_eps;
    "ast.hilbert_imaginary_part", 1e-3, ast_hilbert_im;
    "ast.cone_boundary_one_side", 1e-3, ast_cone_boundary;
    "ast.delta_tilde_1d", 1e-15, ast_delta_1d;
    "ast.delta_tilde_homogeneity", 1e-14, ast_delta_homogeneity;
    "wave.left_moving_mode", 1e-12, wave_left_moving;
    "wave.reflections_involutive", 0.0, wave_involutions;
    "wave.lorentz_parity", 1e-10, wave_lorentz_parity;
    "wave.unitarity", 1e-6, wave_unitarity;
    "wave.dilation_unitary_s1", 1e-6, wave_dilation_s1;
    "wave.translation_exact", 1e-14, wave_translation_exact;
    "wave.negative_frequency_minus", 0.0, wave_negative_frequency;
    "wave.weight_shift_unitary", 1e-12, wave_weight_shift;
    "wave.harmonic", 1e-5, wave_harmonic;
    "wave.boundary_limit", 1e-3, wave_boundary_limit;
    "wave.wavelet_pairing", 1e-8, wave_pairing;
    "wave.n_s_closed_form", 1e-14, wave_n_s;
    "wave.boundary_norm", 1e-3, wave_boundary_norm;
    "wave.pseudo_local_norm", 1e-2, wave_pseudo_local_norm;
    "wave.ez_norm", 1e-4, wave_ez_norm;
    "wave.positive_time_positive_frequency", 0.0, wave_positive_time;
    "wave.minus_is_conjugate_plus", 1e-14, wave_minus_conjugate;
    "wave.mother_orbit", 1e-8, wave_mother_orbit;
    "wave.ez_spacetime_value", 1e-15, wave_ez_value;
    "wave.ez_spacetime_spectral", 1e-8, wave_ez_spectral;
    "wave.envelope_width", 1e-12, wave_envelope;
    "wave.color", 1e-4, wave_color;
    "wave.color_sign", 0.0, wave_color_sign;
    "wave.resolution_identity", 1e-2, wave_resolution;
    "wave.phase_space_form", 1e-10, wave_phase_space_form;
    "wave.kernel_opposite_signs", 0.0, wave_kernel_signs;
    "wave.consistency_true_ast", 2e-2, wave_consistency;
    "wave.gram_psd", 1e-10, wave_gram;
    "wave.mobius_sign", 0.0, wave_mobius_sign;
    "wave.h_infinity_coset", 0.0, wave_h_infinity;
    "wave.sl2_affine", 1e-8, wave_sl2_affine;
    "wave.sl2_norm", 1e-2, wave_sl2_norm;
    "wave.sl2_wavelet_covariance", 1e-6, wave_sl2_covariance;
};

/// Names of all checks, in run order.
pub fn check_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|c| c.name).collect()
}

fn run_check(c: &Check, cfg: &SuiteConfig) -> CheckReport {
    let t0 = Instant::now();
    let r = (c.run)(cfg);
    let runtime_ms = t0.elapsed().as_millis() as u64;
    match r {
        Ok(o) => CheckReport {
            name: c.name.into(),
            lhs: o.lhs,
            rhs: o.rhs,
            rel_error: o.err,
            tol: c.tol,
            pass: o.err <= c.tol,
            runtime_ms,
            error: None,
        },
        Err(e) => CheckReport {
            name: c.name.into(),
            lhs: f64::NAN.into(),
            rhs: f64::NAN.into(),
            rel_error: f64::INFINITY,
            tol: c.tol,
            pass: false,
            runtime_ms,
            error: Some(e.to_string()),
        },
    }
}

/// Runs one named check.
pub fn run_named(name: &str, cfg: &SuiteConfig) -> Result<CheckReport> {
    let c = REGISTRY.iter().find(|c| c.name == name).ok_or_else(|| Error::Unknown {
        kind: "check",
        name: name.into(),
        options: check_names().join(", "),
    })?;
    Ok(run_check(c, cfg))
}

/// Runs a suite: `all` or one module prefix.
pub fn run_suite(suite: &str, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    if !SUITES.contains(&suite) {
        return Err(Error::Unknown {
            kind: "suite",
            name: suite.into(),
            options: SUITES.join(", "),
        });
    }
    if cfg.s == 0 {
        return invalid("wave checks need s ≥ 1");
    }
    let prefix = format!("{suite}.");
    Ok(REGISTRY
        .iter()
        .filter(|c| suite == "all" || c.name.starts_with(&prefix))
        .map(|c| run_check(c, cfg))
        .collect())
}

// ---------------------------------------------------------------- window

fn window_ast_inadmissible(_: &SuiteConfig) -> Result<Outcome> {
    let rep = admissibility_constant(&builtin_window("ast")?, DEFAULT_TOL)?;
    out(rep.c_h.finite().unwrap_or(f64::INFINITY), f64::INFINITY, flag(rep.c_h.is_infinite() && !rep.admissible))
}

fn window_ast_half(_: &SuiteConfig) -> Result<Outcome> {
    let v = builtin_window("ast")?.hat1(0.0);
    out(v, C64::new(0.5, 0.0), (v - 0.5).norm())
}

fn window_rigid_d1(_: &SuiteConfig) -> Result<Outcome> {
    let h = builtin_window("gauss-deriv-1")?;
    let c = admissibility_constant(&h, DEFAULT_TOL)?.c_h.finite().ok_or_else(|| Error::Invariant("c_h = ∞".into()))?;
    let mut items = Vec::new();
    for (n, res) in [(2, 32), (3, 12)] {
        let r = rigid_admissibility(&h, n, 1, &so_n_quadrature(n, res)?)?;
        let inv = r.inverse_n.finite().ok_or_else(|| Error::Invariant("N⁻¹ = ∞".into()))?;
        // the rotation average of |ĥ(v R₁₁)|² over v⁻¹dv is half of c_h
        items.push(Outcome { lhs: inv.into(), rhs: (0.5 * c).into(), err: (inv - 0.5 * c).abs() });
    }
    worst(items)
}

// ------------------------------------------------------------------ xray

fn grid2(n: usize, half: f64) -> Result<Grid> {
    Grid::cube(Axis::periodic(-half, half, n)?, 2)
}

/// The desk-scale X-ray setup: 64² grid, spacing 0.1, band [0.5, 4].
fn acceptance_grid() -> Result<Grid> {
    Grid::cube(Axis::new(64, 0.1, -3.2)?, 2)
}

const BAND: (f64, f64) = (0.5, 4.0);

fn xray_dilation(cfg: &SuiteConfig) -> Result<Outcome> {
    let f = bandlimited(&grid2(32, 4.0)?, 0.3, 1.5, &mut rng(cfg, 1))?;
    let h = builtin_window("gauss-deriv-1")?;
    let a = 2.0;
    let ha = h.dilated(a);
    let tg = Grid::from_axis(Axis::new(4001, 0.0025, -5.0)?);
    let x = vec![0.2, -0.1];
    let v = vec![0.6, 0.3];
    let av: Vec<f64> = v.iter().map(|c| a * c).collect();
    let lhs = xray_forward_direct(&f, &h, &[XRayPoint { x: x.clone(), v: av }], &tg)?.values[0];
    let rhs = xray_forward_direct(&f, &ha, &[XRayPoint { x, v }], &tg)?.values[0];
    out(lhs, rhs, (lhs - rhs).norm())
}

fn xray_small_velocity(cfg: &SuiteConfig) -> Result<Outcome> {
    let f = bandlimited(&grid2(32, 4.0)?, 0.3, 1.5, &mut rng(cfg, 2))?;
    let h = builtin_window("gauss-deriv-1")?;
    let s = xray_forward_spectral(&f, &h, &[1e-3, 0.0])?;
    let r = s.max_abs() / f.max_abs();
    out(s.max_abs(), f.max_abs(), r)
}

fn xray_pairing(cfg: &SuiteConfig) -> Result<Outcome> {
    let grid = grid2(40, 4.0)?;
    let f = bandlimited(&grid, 0.3, 2.0, &mut rng(cfg, 3))?;
    let h = builtin_window("morlet-like")?;
    let v = vec![0.3, 0.5];
    let slice = xray_forward_spectral(&f, &h, &v)?;
    let mut items = Vec::new();
    for k in [5usize, 333, 1200] {
        let w = wavelet_xray(&h, &grid.point(k), &v, &grid)?;
        let a = w.inner(&f);
        items.push(Outcome { lhs: a.into(), rhs: slice.values[k].into(), err: (a - slice.values[k]).norm() });
    }
    worst(items)
}

fn xray_translation(_: &SuiteConfig) -> Result<Outcome> {
    let grid = grid2(32, 4.0)?;
    let h = builtin_window("gauss-deriv-1")?;
    let (v, x) = (vec![0.7, 0.2], vec![0.1, -0.3]);
    let (bx, by) = (3usize, 5usize);
    let b = [bx as f64 * 0.25, by as f64 * 0.25];
    let w0 = wavelet_xray(&h, &x, &v, &grid)?;
    let w1 = wavelet_xray(&h, &[x[0] + b[0], x[1] + b[1]], &v, &grid)?;
    let mut e: f64 = 0.0;
    for i in 0..32 {
        for j in 0..32 {
            let src = ((i + 32 - bx) % 32) * 32 + (j + 32 - by) % 32;
            e = e.max((w1.values[i * 32 + j] - w0.values[src]).norm());
        }
    }
    out(w1.norm_sq(), w0.norm_sq(), e)
}

fn xray_rotation(_: &SuiteConfig) -> Result<Outcome> {
    let n = 33;
    let grid = Grid::cube(Axis::symmetric(n, 0.25)?, 2)?;
    let h = builtin_window("gauss-deriv-1")?;
    let (x, v) = (vec![0.4, -0.2], vec![0.9, 0.35]);
    let w = wavelet_xray(&h, &x, &v, &grid)?;
    let rot = |p: &[f64]| vec![-p[1], p[0]];
    let wr = wavelet_xray(&h, &rot(&x), &rot(&v), &grid)?;
    let mut e: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            e = e.max((w.values[j * n + (n - 1 - i)] - wr.values[i * n + j]).norm());
        }
    }
    out(wr.norm_sq(), w.norm_sq(), e)
}

fn acceptance_signals(cfg: &SuiteConfig) -> Result<Vec<SampledSignal>> {
    let grid = acceptance_grid()?;
    (0..3).map(|k| bandlimited(&grid, BAND.0, BAND.1, &mut rng(cfg, 100 + k))).collect()
}

fn xray_plancherel_check(cfg: &SuiteConfig) -> Result<Outcome> {
    let h = builtin_window("gauss-deriv-1")?;
    let d = VDesign::default_for(&h, 2, BAND)?;
    let mut items = Vec::new();
    for f in acceptance_signals(cfg)? {
        let p = xray_plancherel(&xray_sweep(&f, &h, &d)?, &h, &f)?;
        items.push(Outcome { lhs: p.lhs.into(), rhs: p.rhs.into(), err: p.rel_error });
    }
    worst(items)
}

fn xray_reconstruction(cfg: &SuiteConfig) -> Result<Outcome> {
    let h = builtin_window("gauss-deriv-1")?;
    let d = VDesign::default_for(&h, 2, BAND)?;
    let mut items = Vec::new();
    for f in acceptance_signals(cfg)? {
        let r = xray_reconstruct(&xray_sweep(&f, &h, &d)?, &h, Some(&f))?;
        let e = r.rel_error.unwrap_or(f64::INFINITY);
        items.push(Outcome { lhs: r.signal.norm_sq().into(), rhs: f.norm_sq().into(), err: e });
    }
    worst(items)
}

fn xray_h_deviation(_: &SuiteConfig) -> Result<Outcome> {
    let h = builtin_window("gauss-deriv-1")?;
    let d = VDesign::default_for(&h, 2, BAND)?;
    // every frequency of the acceptance grid inside the band, plus rings
    let mut ps: Vec<Vec<f64>> = acceptance_grid()?
        .dual()
        .points()
        .into_iter()
        .filter(|p| {
            let r = p[0].hypot(p[1]);
            r >= BAND.0 && r <= BAND.1
        })
        .collect();
    ps.extend(ring_samples(2, BAND.0, BAND.1, 16, 64));
    let r = resolution_kernel_check(&h, 2, &ps, &d)?;
    let (k, _) = r
        .values
        .iter()
        .enumerate()
        .max_by(|a, b| (a.1 - 1.0).abs().total_cmp(&(b.1 - 1.0).abs()))
        .unwrap();
    out(r.values[k], 1.0, r.max_deviation)
}

fn xray_h_invariance(_: &SuiteConfig) -> Result<Outcome> {
    let h = builtin_window("gauss-deriv-1")?;
    let d = VDesign::default_for(&h, 2, BAND)?;
    let norm = normalization_constant(&h, 2)?;
    let p = [1.3, 0.4];
    let h0 = resolution_function(&h, norm, &p, &d);
    let mut items = Vec::new();
    for m in [1, 5, 13] {
        let a = 2.0 * PI * m as f64 / d.angles as f64;
        let q = [a.cos() * p[0] - a.sin() * p[1], a.sin() * p[0] + a.cos() * p[1]];
        let hq = resolution_function(&h, norm, &q, &d);
        items.push(Outcome { lhs: hq.into(), rhs: h0.into(), err: (hq - h0).abs() });
    }
    worst(items)
}

fn xray_inadmissible(_: &SuiteConfig) -> Result<Outcome> {
    let g = builtin_window("gauss-deriv-1")?;
    let d = VDesign::default_for(&g, 2, BAND)?;
    let r = resolution_kernel_check(&builtin_window("ast")?, 2, &[vec![1.0, 0.0]], &d);
    out(0.0, 0.0, flag(matches!(r, Err(Error::Inadmissible { .. }))))
}

// ----------------------------------------------------------------- radon

fn radon_velocities(_: &SuiteConfig) -> Result<Outcome> {
    let mut e: f64 = 0.0;
    for (speed, a) in [(0.5, 0.0), (1.3, 0.9), (2.0, -2.4), (0.05, 3.1)] {
        let m = RigidMotion::new(speed, rotation2(a))?;
        let col = motion_matrix(&m, 1, 2)?;
        e = e.max((col[(0, 0)] - speed * a.cos()).abs()).max((col[(1, 0)] - speed * a.sin()).abs());
    }
    out(e, 0.0, e)
}

fn radon_direct_xray(cfg: &SuiteConfig) -> Result<Outcome> {
    let f = bandlimited(&grid2(32, 4.0)?, 0.3, 1.5, &mut rng(cfg, 4))?;
    let h = builtin_window("gauss-deriv-1")?;
    let tg = Grid::from_axis(Axis::new(801, 0.01, -4.0)?);
    let m = RigidMotion::new(1.3, rotation2(0.9))?;
    let x = vec![0.2, -0.7];
    let r = radon_forward(&f, &h, &[(x.clone(), m)], &tg)?.entries[0].value;
    let v = vec![1.3 * 0.9f64.cos(), 1.3 * 0.9f64.sin()];
    let xr = xray_forward_direct(&f, &h, &[XRayPoint { x, v }], &tg)?.values[0];
    out(r, xr, (r - xr).norm())
}

/// X-ray design matching the `SO(2)` product rule exactly: angles `2πk/32`.
fn matched_designs() -> Result<(crate::radon::RotationQuadrature, VDesign)> {
    let h = builtin_window("gauss-deriv-1")?;
    let base = VDesign::default_for(&h, 2, BAND)?;
    let rule = so_n_quadrature(2, base.angles)?;
    let design = VDesign::polar(2, base.radii, base.angles, 0.0)?;
    Ok((rule, design))
}

fn radon_forward_xray(cfg: &SuiteConfig) -> Result<Outcome> {
    let h = builtin_window("gauss-deriv-1")?;
    let (rule, design) = matched_designs()?;
    let f = &acceptance_signals(cfg)?[0];
    let rs = radon_sweep(f, &h, 1, &rule, &design.radii)?;
    let xs = xray_sweep(f, &h, &design)?;
    let e = rs.slices.iter().zip(&xs.slices).map(|(a, b)| a.rel_l2_error(b)).fold(0.0, f64::max);
    out(rs.slices.len() as f64, xs.slices.len() as f64, e)
}

fn radon_reconstruct_xray(cfg: &SuiteConfig) -> Result<Outcome> {
    let h = builtin_window("gauss-deriv-1")?;
    let (rule, design) = matched_designs()?;
    let f = &acceptance_signals(cfg)?[0];
    let ra = radon_reconstruct(&radon_sweep(f, &h, 1, &rule, &design.radii)?, &h, Some(f))?;
    let rb = xray_reconstruct(&xray_sweep(f, &h, &design)?, &h, Some(f))?;
    out(ra.signal.norm_sq(), rb.signal.norm_sq(), ra.signal.rel_l2_error(&rb.signal))
}

// ------------------------------------------------------------------- ast

fn cos_signal() -> Result<SampledSignal> {
    let g = Grid::from_axis(Axis::periodic(0.0, 2.0 * PI, 64)?);
    SampledSignal::from_fn(g, |x| C64::new(x[0].cos(), 0.0))
}

fn gauss(n: usize, half: f64, count: usize) -> Result<SampledSignal> {
    let g = Grid::cube(Axis::periodic(-half, half, count)?, n)?;
    SampledSignal::from_fn(g, |x| C64::new((-PI * x.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0))
}

fn sup_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn ast_gabor(_: &SuiteConfig) -> Result<Outcome> {
    let f = cos_signal()?;
    let (fp, _) = analytic_signal_1d(&f)?;
    let want: Vec<C64> = f.grid.dims[0].nodes().iter().map(|x| C64::from_polar(1.0, *x)).collect();
    let got: Vec<C64> = fp.values.iter().map(|v| 2.0 * v).collect();
    out(got[1], want[1], sup_diff(&got, &want))
}

fn ast_real_conjugate(cfg: &SuiteConfig) -> Result<Outcome> {
    let g = Grid::from_axis(Axis::periodic(-4.0, 4.0, 128)?);
    let c = bandlimited(&g, 0.0, 3.0, &mut rng(cfg, 5))?;
    let f = SampledSignal::new(g, c.values.iter().map(|v| C64::new(v.re, 0.0)).collect())?;
    let (fp, fm) = analytic_signal_1d(&f)?;
    let conj: Vec<C64> = fm.values.iter().map(|v| v.conj()).collect();
    out(fp.values[7], conj[7], sup_diff(&fp.values, &conj))
}

fn ast_zero_direction(cfg: &SuiteConfig) -> Result<Outcome> {
    let g = Grid::cube(Axis::periodic(-2.0, 2.0, 16)?, 2)?;
    let f = bandlimited(&g, 0.0, 3.0, &mut rng(cfg, 6))?;
    let idx = [3usize, 100, 201];
    let pts: Vec<ComplexPoint> = idx.iter().map(|&k| ComplexPoint::new(g.point(k), vec![0.0, 0.0])).collect();
    let r = ast_spectral(&f, &pts)?.values;
    let half: Vec<C64> = idx.iter().map(|&k| 0.5 * f.values[k]).collect();
    out(r[0], half[0], sup_diff(&r, &half))
}

fn ast_hardy(_: &SuiteConfig) -> Result<Outcome> {
    let g = Grid::from_axis(Axis::periodic(-8.0, 8.0, 128)?);
    let spec = SpectralSignal::from_fn(g, |p| {
        if p[0] > 0.0 {
            C64::new(p[0] * (-PI * (p[0] - 1.0).powi(2)).exp(), 0.3)
        } else {
            C64::default()
        }
    })?;
    let f = idft(&spec)?;
    let pts: Vec<ComplexPoint> = [0.1, 0.5, 2.0].iter().map(|&y| ComplexPoint::new(vec![0.3], vec![-y])).collect();
    let m = ast_spectral(&f, &pts)?.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    out(m, 0.0, m)
}

fn ast_line_vs_spectral(_: &SuiteConfig) -> Result<Outcome> {
    let tau = Grid::from_axis(Axis::symmetric(321, 0.05)?);
    let mut items = Vec::new();
    let f1 = gauss(1, 64.0, 512)?;
    let z = ComplexPoint::new(vec![0.2], vec![1.0]);
    let a = ast_line_integral(&f1, &z, &tau)?;
    let b = ast_spectral(&f1, &[z])?.values[0];
    items.push(Outcome { lhs: a.into(), rhs: b.into(), err: (a - b).norm() });
    let f2 = gauss(2, 48.0, 384)?;
    for y in [vec![0.0, 1.0], vec![0.0, 2.0]] {
        let z = ComplexPoint::new(vec![0.0, 0.0], y);
        let a = ast_line_integral(&f2, &z, &tau)?;
        let b = ast_spectral(&f2, &[z])?.values[0];
        items.push(Outcome { lhs: a.into(), rhs: b.into(), err: (a - b).norm() });
    }
    worst(items)
}

fn ast_cr_directional(_: &SuiteConfig) -> Result<Outcome> {
    let f = gauss(2, 4.0, 32)?;
    let mut items = Vec::new();
    for z in [
        ComplexPoint::new(vec![0.3, -0.2], vec![0.4, 0.7]),
        ComplexPoint::new(vec![-0.5, 0.1], vec![-0.6, 0.2]),
    ] {
        let scale = ast_spectral(&f, &[z.clone()])?.values[0].norm().max(1e-3);
        let r = cr_residual(&f, &z, 1e-2)?.norm();
        items.push(Outcome { lhs: r.into(), rhs: scale.into(), err: r / scale });
    }
    worst(items)
}

fn ast_cr_1d(_: &SuiteConfig) -> Result<Outcome> {
    let f = gauss(1, 8.0, 64)?;
    let mut items = Vec::new();
    for y in [0.5, -0.3] {
        let r = cr_residual_1d(&f, &ComplexPoint::new(vec![0.1], vec![y]), 1e-2)?.norm();
        items.push(Outcome { lhs: r.into(), rhs: 0.0.into(), err: r });
    }
    worst(items)
}

fn smooth_1d() -> Result<SampledSignal> {
    let g = Grid::from_axis(Axis::periodic(-32.0, 32.0, 256)?);
    SampledSignal::from_fn(g, |x| C64::new((-PI * x[0] * x[0] / 16.0).exp(), 0.0))
}

fn ast_hilbert_pv(_: &SuiteConfig) -> Result<Outcome> {
    let f = smooth_1d()?;
    let spec = hilbert_spectral(&f, &[1.0])?;
    let u = hilbert_u_grid(&f, &[1.0], 1e-4)?;
    let pv = directional_hilbert(&f, &[1.0], &u)?;
    out(pv.values[128], spec.values[128], sup_diff(&pv.values, &spec.values))
}

fn ast_hilbert_eps(_: &SuiteConfig) -> Result<Outcome> {
    let f = smooth_1d()?;
    let eps = hilbert_eps(&f, &[1.0], 1e-3)?;
    let u = hilbert_u_grid(&f, &[1.0], 1e-4)?;
    let pv = directional_hilbert(&f, &[1.0], &u)?;
    out(eps.values[120], pv.values[120], sup_diff(&eps.values, &pv.values))
}

fn ast_hilbert_im(_: &SuiteConfig) -> Result<Outcome> {
    let f = smooth_1d()?;
    let spec = hilbert_spectral(&f, &[1.0])?;
    let g = ast_grid(&f, &[1e-3])?;
    let two_im: Vec<C64> = g.values.iter().map(|v| C64::new(2.0 * v.im, 0.0)).collect();
    out(two_im[120], spec.values[120], sup_diff(&two_im, &spec.values))
}

fn ast_cone_boundary(_: &SuiteConfig) -> Result<Outcome> {
    let g = Grid::from_axis(Axis::periodic(-32.0, 32.0, 256)?);
    let spec = SpectralSignal::from_fn(g, |p| {
        if p[0] > 0.0 {
            C64::new(p[0] * (-PI * p[0] * p[0] * 16.0).exp(), 0.0)
        } else {
            C64::default()
        }
    })?;
    let f = idft(&spec)?;
    let minus = ast_grid(&f, &[-1e-3])?.max_abs();
    let plus = ast_grid(&f, &[1e-3])?;
    let e = sup_diff(&plus.values, &f.values) / f.max_abs();
    out(plus.max_abs(), f.max_abs(), e.max(minus / f.max_abs()))
}

fn ast_delta_1d(_: &SuiteConfig) -> Result<Outcome> {
    let a = delta_tilde(&[0.0], &[1.0], None)?.factor;
    let want = C64::new(1.0 / (2.0 * PI), 0.0);
    out(a, want, (a - want).norm())
}

fn ast_delta_homogeneity(_: &SuiteConfig) -> Result<Outcome> {
    let (q, p, lambda) = (0.4, -1.3, 2.0);
    let a = delta_tilde(&[lambda * q], &[lambda * p], None)?.factor;
    let b = delta_tilde(&[q], &[p], None)?.factor / lambda;
    out(a, b, crel(a, b))
}

// ------------------------------------------------------------------ wave

fn cfg_sol(cfg: &SuiteConfig, salt: u64, s: u32) -> Result<WaveSolution> {
    random_solution(default_p_axis(8.0, 1.0 / 64.0)?, s, &mut rng(cfg, salt))
}

fn wave_left_moving(_: &SuiteConfig) -> Result<Outcome> {
    let ax = Axis::centered(64, 1.0 / 16.0)?;
    let k0 = 40;
    let p0 = ax.node(k0);
    let sol = WaveSolution::from_fn(
        Grid::from_axis(ax),
        1,
        |p| if (p - p0).abs() < 1e-12 { C64::new(1.0, 0.0) } else { C64::default() },
        |_| C64::default(),
    )?;
    let x0 = 0.3;
    let pts: Vec<(f64, f64)> = [-1.0, -0.2, 0.0, 0.7, 2.5].iter().map(|&t| (x0 - t, t)).collect();
    let v = evaluate_spacetime(&sol, &pts);
    let want = C64::from_polar(ax.spacing, 2.0 * PI * p0 * x0);
    out(v[0], want, sup_diff(&v, &vec![want; v.len()]) / ax.spacing)
}

fn wave_involutions(cfg: &SuiteConfig) -> Result<Outcome> {
    let f = cfg_sol(cfg, 10, cfg.s)?;
    let mut bad = 0.0;
    for op in [Symmetry::Parity, Symmetry::Reflect] {
        if apply(&apply(&f, op)?, op)? != f {
            bad += 1.0;
        }
    }
    out(bad, 0.0, bad)
}

fn wave_lorentz_parity(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut items = Vec::new();
    for k in 0..3 {
        let f = cfg_sol(cfg, 20 + k, cfg.s)?;
        for lambda in [1.3, 0.8, 1.2] {
            let lp = apply(&apply(&f, Symmetry::Parity)?, Symmetry::Lorentz(lambda))?;
            let pl = apply(&apply(&f, Symmetry::Lorentz(1.0 / lambda))?, Symmetry::Parity)?;
            items.push(Outcome { lhs: lp.sobolev_norm().into(), rhs: pl.sobolev_norm().into(), err: lp.max_rel_diff(&pl)? });
        }
    }
    worst(items)
}

fn wave_unitarity(cfg: &SuiteConfig) -> Result<Outcome> {
    let f = cfg_sol(cfg, 30, cfg.s)?;
    let n0 = f.sobolev_norm_sq();
    let mut items = Vec::new();
    for op in [
        Symmetry::spacetime(0.7, -1.1),
        Symmetry::Lorentz(1.2),
        Symmetry::Lorentz(0.8),
        Symmetry::Dilation(2.0),
        Symmetry::Dilation(0.75),
        Symmetry::Parity,
        Symmetry::Reflect,
    ] {
        let n1 = apply(&f, op)?.sobolev_norm_sq();
        items.push(Outcome { lhs: n1.into(), rhs: n0.into(), err: rel(n1, n0) });
    }
    worst(items)
}

fn wave_dilation_s1(cfg: &SuiteConfig) -> Result<Outcome> {
    let f = cfg_sol(cfg, 31, 1)?;
    let n1 = apply(&f, Symmetry::Dilation(2.0))?.sobolev_norm();
    out(n1, f.sobolev_norm(), rel(n1, f.sobolev_norm()))
}

fn wave_translation_exact(cfg: &SuiteConfig) -> Result<Outcome> {
    let f = cfg_sol(cfg, 32, cfg.s)?;
    let g = apply(&f, Symmetry::Translate { u0: 3.5, v0: -1.25 })?;
    out(g.sobolev_norm_sq(), f.sobolev_norm_sq(), rel(g.sobolev_norm_sq(), f.sobolev_norm_sq()))
}

fn wave_negative_frequency(_: &SuiteConfig) -> Result<Outcome> {
    let ax = default_p_axis(8.0, 1.0 / 64.0)?;
    let f = WaveSolution::from_fn(
        Grid::from_axis(ax),
        1,
        |_| C64::default(),
        |p| if p > 0.0 { C64::new(p * (-PI * (p - 1.5).powi(2)).exp(), 0.0) } else { C64::default() },
    )?;
    let fc = frequency_components(&f);
    let pos = fc.positive().max_abs();
    let d = fc.negative().max_rel_diff(&f)?;
    out(fc.minus_pos.sobolev_norm_sq(), f.sobolev_norm_sq(), d.max(pos))
}

fn wave_weight_shift(cfg: &SuiteConfig) -> Result<Outcome> {
    let f = cfg_sol(cfg, 33, 1)?;
    let g = weight_shift(&f, 3)?;
    out(g.sobolev_norm_sq(), f.sobolev_norm_sq(), rel(g.sobolev_norm_sq(), f.sobolev_norm_sq()))
}

fn wave_harmonic(_: &SuiteConfig) -> Result<Outcome> {
    let ax = default_p_axis(8.0, 1.0 / 64.0)?;
    let f = WaveSolution::from_fn(
        Grid::from_axis(ax),
        1,
        |p| C64::new((-PI * ((p - 1.0) / 0.3).powi(2)).exp(), 0.0),
        |p| C64::new(0.0, (-PI * ((p + 0.8) / 0.3).powi(2)).exp()),
    )?;
    let mut items = Vec::new();
    for z in [EuclideanPoint::new(0.3, 0.25), EuclideanPoint::new(-1.0, -0.4), EuclideanPoint::new(2.0, 1.0)] {
        let peak = euclidean_ast(&f, &[z])[0]
            .norm()
            .max(euclidean_ast(&f, &[EuclideanPoint::new(0.0, z.t_prime)])[0].norm());
        let r = harmonic_residual(&f, z, 1e-4)?.norm();
        items.push(Outcome { lhs: r.into(), rhs: peak.into(), err: r / peak });
    }
    worst(items)
}

fn wave_boundary_limit(cfg: &SuiteConfig) -> Result<Outcome> {
    let f = cfg_sol(cfg, 34, cfg.s)?;
    let x = Axis::new(40, 0.1, -2.0)?;
    let pts: Vec<(f64, f64)> = x.nodes().iter().map(|&x| (x, 0.0)).collect();
    let mut items = Vec::new();
    for positive in [true, false] {
        let bv = boundary_values(&f, &x, positive, &WAVE_EPS_SCHEDULE)?;
        let fc = frequency_components(&f);
        let part = if positive { fc.positive() } else { fc.negative() };
        let exact = evaluate_spacetime(&part, &pts);
        let m = exact.iter().map(|c| c.norm()).fold(0.0, f64::max);
        items.push(Outcome { lhs: bv.values[0].into(), rhs: exact[0].into(), err: sup_diff(&bv.values, &exact) / m });
    }
    worst(items)
}

fn wave_pairing(cfg: &SuiteConfig) -> Result<Outcome> {
    let f = cfg_sol(cfg, 35, cfg.s)?;
    let mut r = rng(cfg, 36);
    let mut items = Vec::new();
    for _ in 0..6 {
        let sign = if r.gen::<bool>() { 1.0 } else { -1.0 };
        let z = EuclideanPoint::new(r.gen_range(-2.0..2.0), sign * r.gen_range(0.1..2.0));
        let a = wavelet_ez(f.s, z, &f.p_grid)?.inner(&f)?;
        let b = euclidean_ast(&f, &[z])[0];
        items.push(Outcome { lhs: a.into(), rhs: b.into(), err: (a - b).norm() / b.norm().max(1e-3) });
    }
    worst(items)
}

fn wave_n_s(_: &SuiteConfig) -> Result<Outcome> {
    let mut items = vec![Outcome { lhs: n_s(1)?.into(), rhs: (4.0 * PI).into(), err: rel(n_s(1)?, 4.0 * PI) }];
    for (s, want) in [(2u32, 16.0 * PI * PI), (3, (4.0 * PI).powi(3) / 2.0)] {
        items.push(Outcome { lhs: n_s(s)?.into(), rhs: want.into(), err: rel(n_s(s)?, want) });
    }
    worst(items)
}

fn wave_boundary_norm(cfg: &SuiteConfig) -> Result<Outcome> {
    let f = cfg_sol(cfg, 37, 0)?;
    let r = boundary_norms(&f, &WAVE_EPS_SCHEDULE)?;
    out(r.plus + r.minus, r.spectral_plus + r.spectral_minus, r.rel_error)
}

fn wave_pseudo_local_norm(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut items = Vec::new();
    for k in 0..3 {
        let f = cfg_sol(cfg, 40 + k, 1)?;
        let d = XtDesign::for_solution(&f, 1e-6)?;
        let r = norm_via_theorem5(&f, &d, 1e-4)?;
        let err = if r.truncated { f64::INFINITY } else { r.rel_error };
        items.push(Outcome { lhs: r.total.into(), rhs: (r.spectral_plus + r.spectral_minus).into(), err });
    }
    worst(items)
}

fn fine_grid() -> Result<Grid> {
    Ok(Grid::from_axis(default_p_axis(10.0, 5e-5)?))
}

fn wave_ez_norm(_: &SuiteConfig) -> Result<Outcome> {
    let g = fine_grid()?;
    let mut items = Vec::new();
    for s in [1, 2] {
        for t in [0.5, 1.0, 2.0] {
            let n = wavelet_ez(s, EuclideanPoint::new(0.3, t), &g)?.sobolev_norm_sq();
            let exact = ez_norm_sq(s, t);
            items.push(Outcome { lhs: n.into(), rhs: exact.into(), err: rel(n, exact) });
        }
    }
    worst(items)
}

fn wave_positive_time(cfg: &SuiteConfig) -> Result<Outcome> {
    let g = Grid::from_axis(default_p_axis(6.0, 1.0 / 128.0)?);
    let e = wavelet_ez(cfg.s, EuclideanPoint::new(0.5, 0.7), &g)?;
    let fc = frequency_components(&e);
    let neg = fc.negative().max_abs();
    out(neg, 0.0, neg + flag(fc.positive() == e))
}

fn wave_minus_conjugate(cfg: &SuiteConfig) -> Result<Outcome> {
    let g = Grid::from_axis(default_p_axis(6.0, 1.0 / 128.0)?);
    let z = EuclideanPoint::new(0.4, 0.9);
    let e = wavelet_ez(cfg.s, z, &g)?;
    let ec = wavelet_ez(cfg.s, EuclideanPoint::new(z.x, -z.t_prime), &g)?;
    // the minus slot of e_z is the plus slot of e_{z*}
    let m = ec.max_abs().max(f64::MIN_POSITIVE);
    out(e.minus[e.len() / 3], ec.plus[e.len() / 3], sup_diff(&e.minus, &ec.plus) / m)
}

fn wave_mother_orbit(_: &SuiteConfig) -> Result<Outcome> {
    let g = Grid::from_axis(Axis::centered(8192, 1.0 / 512.0)?);
    let phi = mother_wavelet(1, &g)?;
    let (x, t) = (0.5, 2.0);
    let td = apply(&apply(&phi, Symmetry::Dilation(t))?, Symmetry::space(x))?.scale(C64::new(1.0 / t, 0.0));
    let ez = wavelet_ez(1, EuclideanPoint::new(x, t), &g)?.plus_only();
    out(td.sobolev_norm(), ez.sobolev_norm(), td.max_rel_diff(&ez)?)
}

fn wave_ez_value(_: &SuiteConfig) -> Result<Outcome> {
    let v = ez_spacetime(1, EuclideanPoint::new(0.0, 1.0), &[(0.0, 0.0)])?[0];
    let want = C64::new(1.0 / (4.0 * PI * PI), 0.0);
    out(v, want, crel(v, want))
}

fn wave_ez_spectral(cfg: &SuiteConfig) -> Result<Outcome> {
    let g = Grid::from_axis(default_p_axis(8.0, 2e-5)?);
    let mut r = rng(cfg, 39);
    let mut items = Vec::new();
    for (s, z1) in [(1, EuclideanPoint::new(0.0, 1.0)), (2, EuclideanPoint::new(0.7, 0.5)), (1, EuclideanPoint::new(-0.3, -1.5))] {
        let e = wavelet_ez(s, z1, &g)?.plus_only();
        let pts: Vec<(f64, f64)> = (0..10).map(|_| (r.gen_range(-1.5..1.5), r.gen_range(-1.0..1.0))).collect();
        let a = ez_spacetime(s, z1, &pts)?;
        let b = evaluate_spacetime(&e, &pts);
        let m = a.iter().map(|c| c.norm()).fold(0.0, f64::max);
        items.push(Outcome { lhs: a[0].into(), rhs: b[0].into(), err: sup_diff(&a, &b) / m });
    }
    worst(items)
}

fn wave_envelope(_: &SuiteConfig) -> Result<Outcome> {
    let mut items = Vec::new();
    for t in [0.5, 2.0] {
        let z1 = EuclideanPoint::new(0.0, t);
        let peak = ez_spacetime(1, z1, &[(0.0, 0.0)])?[0].norm_sqr();
        let at = ez_spacetime(1, z1, &[(t, 0.0)])?[0].norm_sqr();
        // (t² + u²)^{−2}: a factor 4 at u = t, so the width scales with t
        items.push(Outcome { lhs: (peak / at).into(), rhs: 4.0.into(), err: rel(peak / at, 4.0) });
    }
    worst(items)
}

fn wave_color(_: &SuiteConfig) -> Result<Outcome> {
    let c = color_stats(1, 1.0)?;
    let exact = (c.nu - 1.0 / (2.0 * PI)).abs() + (c.delta_nu - 2f64.sqrt() / (4.0 * PI)).abs();
    let c2 = color_stats(2, 0.5)?;
    out(c.grid_nu_plus, c.nu, c.rel_error.max(c2.rel_error).max(exact))
}

fn wave_color_sign(_: &SuiteConfig) -> Result<Outcome> {
    let c = color_stats(1, -1.0)?;
    let want = -2.0 / (4.0 * PI);
    out(c.nu, want, flag(c.nu < 0.0 && c.grid_nu_plus < 0.0 && (c.nu - want).abs() < 1e-15))
}

fn wave_resolution(cfg: &SuiteConfig) -> Result<Outcome> {
    let f = cfg_sol(cfg, 50, 1)?;
    let g = cfg_sol(cfg, 51, 1)?;
    let d = XtDesign::for_solution(&f, 1e-6)?;
    let a = resolution_identity_check(&f, &f, &d)?;
    let b = resolution_identity_check(&f, &g, &d)?;
    worst(vec![
        Outcome { lhs: a.lhs.into(), rhs: a.rhs.into(), err: a.rel_error },
        Outcome { lhs: b.lhs.into(), rhs: b.rhs.into(), err: b.rel_error },
    ])
}

fn wave_phase_space_form(cfg: &SuiteConfig) -> Result<Outcome> {
    let f = cfg_sol(cfg, 52, 1)?;
    let d = XtDesign::for_solution(&f, 1e-6)?;
    let r = resolution_identity_check(&f, &f, &d)?;
    out(r.phase_space_form, r.lhs, r.form_spread)
}

fn wave_kernel_signs(_: &SuiteConfig) -> Result<Outcome> {
    let k = reproducing_kernel(1, EuclideanPoint::new(0.3, 0.8), EuclideanPoint::new(0.0, -1.0))?;
    out(k, C64::default(), k.norm())
}

fn wave_consistency(_: &SuiteConfig) -> Result<Outcome> {
    let design = PlaneDesign::default();
    let f = crate::demo::two_wavelet(1)?;
    let vals = design.sample(&f);
    let probes = nearest_nodes(
        &design,
        &[
            EuclideanPoint::new(0.0, 1.0),
            EuclideanPoint::new(2.0, 0.5),
            EuclideanPoint::new(1.0, 0.7),
            EuclideanPoint::new(-1.0, -1.0),
            EuclideanPoint::new(3.0, 2.0),
        ],
    );
    let r = consistency_check(&design, &vals, 1, &probes)?;
    out(r, 0.0, r)
}

fn wave_gram(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut r = rng(cfg, 53);
    let pts: Vec<EuclideanPoint> = (0..8)
        .map(|k| EuclideanPoint::new(r.gen_range(-2.0..2.0), r.gen_range(0.3..2.0) * if k % 3 == 0 { -1.0 } else { 1.0 }))
        .collect();
    let m = gram_matrix(1, &pts)?;
    let asym = (&m - m.transpose()).amax();
    let lo = min_eigenvalue(&m);
    out(lo, 0.0, (-lo).max(0.0).max(asym))
}

fn wave_mobius_sign(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut r = rng(cfg, 54);
    let mut bad = 0usize;
    for _ in 0..100 {
        let sigma = Sl2Element::random(&mut r, 1.0);
        let z = C64::new(r.gen_range(-3.0..3.0), r.gen_range(0.01..3.0));
        let up = mobius(&sigma, z).finite().map_or(false, |w| w.im > 0.0);
        let down = mobius(&sigma, z.conj()).finite().map_or(false, |w| w.im < 0.0);
        bad += usize::from(!(up && down));
    }
    out(bad as f64, 0.0, bad as f64)
}

fn wave_h_infinity(_: &SuiteConfig) -> Result<Outcome> {
    let j = Sl2Element::new(0.0, -1.0, 1.0, 0.0)?;
    out(0.0, 0.0, flag(sl2_decompose(&j) == Sl2Coset::HInfinity))
}

fn test_atoms() -> Result<AtomSolution> {
    AtomSolution::new(
        1,
        AtomKind::Plus,
        vec![
            Atom { coeff: C64::new(1.0, 0.0), z: EuclideanPoint::new(0.0, 1.0) },
            Atom { coeff: C64::new(0.4, -0.6), z: EuclideanPoint::new(1.5, 0.6) },
            Atom { coeff: C64::new(-0.2, 0.3), z: EuclideanPoint::new(-1.0, 1.8) },
        ],
    )
}

fn wave_sl2_affine(cfg: &SuiteConfig) -> Result<Outcome> {
    let (alpha, beta): (f64, f64) = (2.0, 0.7);
    let r = alpha.sqrt();
    let sigma = Sl2Element::new(1.0 / r, -beta / r, 0.0, r)?;
    let g = Grid::from_axis(Axis::centered(2048, 1.0 / 128.0)?);
    let f = random_solution(g.dims[0], 1, &mut rng(cfg, 55))?.plus_only();
    let moved = apply(&apply(&f, Symmetry::Dilation(alpha))?, Symmetry::space(beta))?;
    let tr = Sl2Transformed::new(&f, sigma);
    let mut items = Vec::new();
    for z in [C64::new(0.2, 0.5), C64::new(-1.0, 1.3), C64::new(0.5, 2.0)] {
        let a = tr.ast(z);
        let b = euclidean_ast(&moved, &[EuclideanPoint::from_z(z)])[0];
        items.push(Outcome { lhs: a.into(), rhs: b.into(), err: (a - b).norm() / b.norm().max(1e-3) });
    }
    worst(items)
}

fn wave_sl2_norm(cfg: &SuiteConfig) -> Result<Outcome> {
    let design = PlaneDesign::default();
    let f = test_atoms()?;
    let exact = f.norm_sq();
    let mut r = rng(cfg, 56);
    let mut items = Vec::new();
    for _ in 0..3 {
        let sigma = Sl2Element::random(&mut r, 1.0);
        let tr = Sl2Transformed::new(&f, sigma);
        let n = plane_norm_sq(&design, &design.sample(&tr), None, 1)?;
        items.push(Outcome { lhs: n.into(), rhs: exact.into(), err: rel(n, exact) });
    }
    worst(items)
}

fn wave_sl2_covariance(cfg: &SuiteConfig) -> Result<Outcome> {
    let f = test_atoms()?;
    let g = Grid::from_axis(default_p_axis(12.0, 2e-5)?);
    let probe = f.to_solution(&g)?;
    let mut r = rng(cfg, 57);
    let mut items = Vec::new();
    for _ in 0..2 {
        let sigma = Sl2Element::random(&mut r, 0.5);
        let moved = transform_atoms(&f, &sigma)?.to_solution(&g)?;
        for z in [EuclideanPoint::new(0.2, 0.9), EuclideanPoint::new(-0.5, 1.4)] {
            let lhs = wavelet_ez(1, z, &g)?.plus_only().inner(&moved)?;
            let w = mobius(&sigma, z.z()).finite().ok_or_else(|| Error::Invariant("σz = ∞".into()))?;
            let rhs = (sigma.c * z.z() + sigma.d).powi(-2) * euclidean_ast(&probe, &[EuclideanPoint::from_z(w)])[0];
            items.push(Outcome { lhs: lhs.into(), rhs: rhs.into(), err: crel(lhs, rhs) });
        }
    }
    worst(items)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_prefixed() {
        let names = check_names();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
        for n in names {
            let prefix = n.split('.').next().unwrap();
            assert!(SUITES[1..].contains(&prefix), "{n}");
        }
    }

    #[test]
    fn unknown_suite_and_check() {
        assert!(matches!(run_suite("nope", &SuiteConfig::default()), Err(Error::Unknown { .. })));
        assert!(run_named("nope", &SuiteConfig::default()).is_err());
        assert!(run_suite("wave", &SuiteConfig { seed: 0, s: 0 }).is_err());
    }

    #[test]
    fn pass_matches_tolerance() {
        let r = run_named("ast.delta_tilde_1d", &SuiteConfig::default()).unwrap();
        assert_eq!(r.pass, r.rel_error <= r.tol);
        assert!(r.pass);
    }

    #[test]
    fn reports_roundtrip_through_json() {
        let mut reports = run_suite("window", &SuiteConfig::default()).unwrap();
        reports.push(CheckReport {
            name: "broken".into(),
            lhs: f64::NAN.into(),
            rhs: f64::NEG_INFINITY.into(),
            rel_error: f64::INFINITY,
            tol: 1.0,
            pass: false,
            runtime_ms: 0,
            error: Some("boom".into()),
        });
        let text = serde_json::to_string(&reports).unwrap();
        let back: Vec<CheckReport> = serde_json::from_str(&text).unwrap();
        assert_eq!(back.len(), reports.len());
        assert_eq!(back[0].lhs, Value::NonFinite("inf".into()));
        assert_eq!(back.last().unwrap().rel_error, f64::INFINITY);
    }

    #[test]
    fn report_serializes_complex_sides() {
        let r = run_named("wave.ez_spacetime_value", &SuiteConfig::default()).unwrap();
        let j = serde_json::to_value(&r).unwrap();
        assert!(j["lhs"]["re"].is_number());
        assert!(j.get("error").is_none());
    }
}
