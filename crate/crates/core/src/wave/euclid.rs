use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use super::solution::{frequency_components, is_zero_node, mode_sum, WaveSolution};
use crate::error::{invalid, Result};
use crate::grid::{Axis, LogAxis};

/// A point `z = x + it′` of the Euclidean region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EuclideanPoint {
    pub x: f64,
    pub t_prime: f64,
}

impl EuclideanPoint {
    pub fn new(x: f64, t_prime: f64) -> Self {
        EuclideanPoint { x, t_prime }
    }

    pub fn z(&self) -> C64 {
        C64::new(self.x, self.t_prime)
    }

    pub fn from_z(z: C64) -> Self {
        EuclideanPoint::new(z.re, z.im)
    }
}

/// `N_s = (4π)^s / Γ(s)`, defined for `s ≥ 1`.
pub fn n_s(s: u32) -> Result<f64> {
    if s == 0 {
        return invalid("N_s needs s ≥ 1");
    }
    Ok((4.0 * PI).powi(s as i32) / gamma(s as f64))
}

/// Index ranges of the negative, zero and positive nodes of a sorted axis.
fn split(ax: &Axis) -> (std::ops::Range<usize>, Option<usize>, std::ops::Range<usize>) {
    let first_nonneg = (0..ax.count).find(|&k| ax.node(k) > -1e-9 * ax.spacing).unwrap_or(ax.count);
    let zero = (first_nonneg < ax.count && is_zero_node(ax.node(first_nonneg), ax.spacing)).then_some(first_nonneg);
    let first_pos = first_nonneg + zero.map_or(0, |_| 1);
    (0..first_nonneg, zero, first_pos..ax.count)
}

fn ast_at(sol: &WaveSolution, z: C64) -> C64 {
    let ax = sol.axis();
    let (neg, zero, pos) = split(&ax);
    let t = z.im;
    let half = zero.map_or(C64::default(), |k| 0.5 * (sol.plus[k] + sol.minus[k]));
    let body = if t > 0.0 {
        mode_sum(&sol.plus, &ax, z, pos) + mode_sum(&sol.minus, &ax, z.conj(), neg) + half
    } else if t < 0.0 {
        mode_sum(&sol.plus, &ax, z, neg) + mode_sum(&sol.minus, &ax, z.conj(), pos) + half
    } else {
        let all = 0..ax.count;
        0.5 * (mode_sum(&sol.plus, &ax, z, all.clone()) + mode_sum(&sol.minus, &ax, z, all))
    };
    body * ax.spacing
}

/// `f̃(x, it′) = Σ [θ(pt′) e^{2πipz} f̂₊ + θ(−pt′) e^{2πipz*} f̂₋] Δp`.
pub fn euclidean_ast(sol: &WaveSolution, pts: &[EuclideanPoint]) -> Vec<C64> {
    pts.par_iter().map(|q| ast_at(sol, q.z())).collect()
}

/// True when `x` is an axis of `count` nodes paired with the frequency axis
/// by the DFT, so that the FFT path applies.
fn fft_compatible(p: &Axis, x: &Axis) -> bool {
    x.count == p.count && (x.spacing * p.period() - 1.0).abs() < 1e-12
}

/// `f̃(·, it′)` on every node of `x`. Uses one FFT when `x` is the dual of
/// the frequency axis.
pub fn ast_on_axis(sol: &WaveSolution, t_prime: f64, x: &Axis) -> Vec<C64> {
    let p = sol.axis();
    if !fft_compatible(&p, x) || t_prime == 0.0 {
        let pts: Vec<EuclideanPoint> = x.nodes().into_iter().map(|x| EuclideanPoint::new(x, t_prime)).collect();
        return euclidean_ast(sol, &pts);
    }
    let sign = t_prime.signum();
    // coefficient of e^{2πipx}: damped plus or minus spectrum
    let mut buf: Vec<C64> = (0..p.count)
        .map(|k| {
            let pk = p.node(k);
            let damp = (-2.0 * PI * pk.abs() * t_prime.abs()).exp();
            let c = if is_zero_node(pk, p.spacing) {
                0.5 * (sol.plus[k] + sol.minus[k])
            } else if pk * sign > 0.0 {
                sol.plus[k]
            } else {
                sol.minus[k]
            };
            c * damp * C64::from_polar(1.0, 2.0 * PI * k as f64 * p.spacing * x.origin)
        })
        .collect();
    FftPlanner::new().plan_fft_inverse(p.count).process(&mut buf);
    (0..x.count)
        .map(|j| buf[j] * C64::from_polar(p.spacing, 2.0 * PI * p.origin * x.node(j)))
        .collect()
}

/// Boundary values `f̃(x, ±iε)` along a decreasing schedule of `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryValues {
    pub values: Vec<C64>,
    pub eps: f64,
    /// Max change between consecutive schedule steps.
    pub changes: Vec<f64>,
}

pub const WAVE_EPS_SCHEDULE: [f64; 5] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5];

pub fn boundary_values(sol: &WaveSolution, x: &Axis, positive: bool, eps_list: &[f64]) -> Result<BoundaryValues> {
    if eps_list.is_empty() || eps_list.iter().any(|e| !(*e > 0.0)) {
        return invalid("ε schedule must be a non-empty list of positive values");
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return invalid("ε schedule must be strictly decreasing");
    }
    let sign = if positive { 1.0 } else { -1.0 };
    let mut prev: Option<Vec<C64>> = None;
    let mut changes = Vec::new();
    for &e in eps_list {
        let v = ast_on_axis(sol, sign * e, x);
        if let Some(p) = &prev {
            changes.push(p.iter().zip(&v).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max));
        }
        prev = Some(v);
    }
    Ok(BoundaryValues {
        values: prev.unwrap(),
        eps: *eps_list.last().unwrap(),
        changes,
    })
}

/// `x` axis of one full period, paired with the frequency axis of `sol`.
pub fn dual_x_axis(sol: &WaveSolution) -> Axis {
    let p = sol.axis();
    let dx = 1.0 / p.period();
    Axis {
        count: p.count,
        spacing: dx,
        origin: -((p.count / 2) as f64) * dx,
    }
}

/// Boundary-form norms for `s = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryNorms {
    pub plus: f64,
    pub minus: f64,
    pub spectral_plus: f64,
    pub spectral_minus: f64,
    pub eps: f64,
    pub rel_error: f64,
}

/// `Σ_x |f̃(x, ±iε)|² Δx` on the dual `x` axis, compared with `‖f^±‖₀²`.
pub fn boundary_norms(sol: &WaveSolution, eps_list: &[f64]) -> Result<BoundaryNorms> {
    if sol.s != 0 {
        return invalid("the boundary form of the norm is for s = 0");
    }
    let x = dual_x_axis(sol);
    let sum = |v: &[C64]| v.iter().map(|c| c.norm_sqr()).sum::<f64>() * x.spacing;
    let bp = boundary_values(sol, &x, true, eps_list)?;
    let bm = boundary_values(sol, &x, false, eps_list)?;
    let fc = frequency_components(sol);
    let sp = fc.positive().sobolev_norm_sq();
    let sm = fc.negative().sobolev_norm_sq();
    let (plus, minus) = (sum(&bp.values), sum(&bm.values));
    Ok(BoundaryNorms {
        plus,
        minus,
        spectral_plus: sp,
        spectral_minus: sm,
        eps: bp.eps,
        rel_error: rel(plus + minus, sp + sm),
    })
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

/// Sampling design over `x` and `|t′|` for the pseudo-local norms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XtDesign {
    pub x: Axis,
    pub t: LogAxis,
}

impl XtDesign {
    /// Dual `x` axis and a log grid in `|t′|` sized from the spectral support:
    /// the lower end leaves a relative tail near `tol`, the upper end damps
    /// the lowest frequency by `e^{-40}`.
    pub fn for_solution(sol: &WaveSolution, tol: f64) -> Result<XtDesign> {
        if !(tol > 0.0 && tol < 1.0) {
            return invalid("tolerance must lie in (0, 1)");
        }
        let s = sol.s.max(1) as f64;
        let p_lo = lowest_frequency(sol).max(0.5 * sol.axis().spacing);
        let t_min = (tol * s).powf(1.0 / s).min(1e-3);
        let t_max = 40.0 / (4.0 * PI * p_lo);
        let count = ((t_max / t_min).ln() / 0.2).ceil() as usize + 1;
        Ok(XtDesign {
            x: dual_x_axis(sol),
            t: LogAxis::new(count, t_min, t_max)?,
        })
    }
}

fn lowest_frequency(sol: &WaveSolution) -> f64 {
    let peak = sol.max_abs();
    let ax = sol.axis();
    (0..ax.count)
        .filter(|&k| sol.plus[k].norm().max(sol.minus[k].norm()) > 1e-14 * peak)
        .map(|k| ax.node(k).abs())
        .filter(|&p| p > 0.0)
        .fold(f64::INFINITY, f64::min)
}

/// Pseudo-local norms and their spectral counterparts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PseudoLocalNorm {
    pub norm_plus: f64,
    pub norm_minus: f64,
    pub total: f64,
    pub spectral_plus: f64,
    pub spectral_minus: f64,
    pub rel_error: f64,
    /// Estimated mass outside `[t_min, t_max]`, relative to `total`.
    pub tail: f64,
    pub truncated: bool,
}

/// `I(t′) = Σ_x |f̃(x, it′)|² Δx` on the design's `x` axis.
fn slice_energy(sol: &WaveSolution, t: f64, x: &Axis) -> f64 {
    ast_on_axis(sol, t, x).iter().map(|c| c.norm_sqr()).sum::<f64>() * x.spacing
}

/// `‖f^±‖²_s = N_s ∫dx ∫₀^∞ dt′ t′^{s−1} |f̃(x, ±it′)|²`, integrated on the
/// design: exact sums in `x`, trapezoid in `ln t′`.
pub fn norm_via_theorem5(sol: &WaveSolution, design: &XtDesign, tol: f64) -> Result<PseudoLocalNorm> {
    let ns = n_s(sol.s)?;
    let s = sol.s as f64;
    let ts = design.t.nodes();
    let lw = design.t.log_weights();
    let side = |sign: f64| -> (f64, f64) {
        let vals: Vec<f64> = ts.par_iter().map(|&t| slice_energy(sol, sign * t, &design.x)).collect();
        let body: f64 = ts.iter().zip(&lw).zip(&vals).map(|((t, w), v)| w * t.powf(s) * v).sum();
        // ∫₀^{t_min} t^{s−1} I ≤ I(0) t_min^s / s with I(0) ≈ I(t_min)
        let lower = vals[0] * design.t.min.powf(s) / s;
        // I(t) ≤ I(t_max) e^{−4π p_lo (t − t_max)} beyond t_max
        let p_lo = lowest_frequency(sol).max(0.5 * sol.axis().spacing);
        let upper = vals[vals.len() - 1] * design.t.max.powf(s) / (4.0 * PI * p_lo * design.t.max).max(1.0);
        (ns * body, ns * (lower + upper))
    };
    let (np, tp) = side(1.0);
    let (nm, tm) = side(-1.0);
    let fc = frequency_components(sol);
    let sp = fc.positive().sobolev_norm_sq();
    let sm = fc.negative().sobolev_norm_sq();
    let total = np + nm;
    let tail = if total > 0.0 { (tp + tm) / total } else { 0.0 };
    Ok(PseudoLocalNorm {
        norm_plus: np,
        norm_minus: nm,
        total,
        spectral_plus: sp,
        spectral_minus: sm,
        // each side against the total, so a vanishing side cannot inflate it
        rel_error: rel(total, sp + sm).max(((np - sp).abs() + (nm - sm).abs()) / (sp + sm).max(f64::MIN_POSITIVE)),
        tail,
        truncated: tail > tol,
    })
}

/// Both sides of the resolution identity, in three equivalent measures.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolutionIdentity {
    /// `N_s ∫dx ∫dt′ |t′|^{s−1} g̃* f̃`.
    pub lhs: C64,
    /// `⟨⟨g, f⟩⟩_s` from the spectra.
    pub rhs: C64,
    /// `(s/2π) ∫dx ∫dt′/t′² ⟨⟨g, P(z) f⟩⟩` with `‖e_z‖²` in closed form.
    pub projector_form: C64,
    /// `(2s/(s+1)) ∫dx ∫dν ⟨⟨g, P(z) f⟩⟩`, `t′ = (s+1)/(4πν)`.
    pub phase_space_form: C64,
    /// `|lhs − rhs| / (‖f‖‖g‖)`.
    pub rel_error: f64,
    /// Spread between the three forms of the left side, relative to `‖f‖‖g‖`.
    pub form_spread: f64,
}

pub fn resolution_identity_check(f: &WaveSolution, g: &WaveSolution, design: &XtDesign) -> Result<ResolutionIdentity> {
    let rhs = g.inner(f)?;
    let s = f.s;
    let ns = n_s(s)?;
    let sf = s as f64;
    let ts = design.t.nodes();
    let lw = design.t.log_weights();
    let cross = |t: f64| -> C64 {
        let a = ast_on_axis(f, t, &design.x);
        let b = ast_on_axis(g, t, &design.x);
        a.iter().zip(&b).map(|(a, b)| b.conj() * a).sum::<C64>() * design.x.spacing
    };
    // C(t′) on both half-planes, indexed like ts
    let slices: Vec<(C64, C64)> = ts.par_iter().map(|&t| (cross(t), cross(-t))).collect();
    let both = |k: usize| slices[k].0 + slices[k].1;
    let mut lebesgue = C64::default();
    let mut projector = C64::default();
    for k in 0..ts.len() {
        let t = ts[k];
        // dt′ = t′ d ln t′
        lebesgue += ns * t.powf(sf - 1.0) * t * lw[k] * both(k);
        projector += sf / (2.0 * PI) / (t * t) * both(k) / super::wavelet::ez_norm_sq(s, t) * t * lw[k];
    }
    // ν nodes are the images of the t′ nodes; dν = ν d ln ν and the log
    // weights carry over unchanged
    let mut phase = C64::default();
    for k in 0..ts.len() {
        let nu = (sf + 1.0) / (4.0 * PI * ts[k]);
        let t = (sf + 1.0) / (4.0 * PI * nu);
        phase += 2.0 * sf / (sf + 1.0) * both(k) / super::wavelet::ez_norm_sq(s, t) * nu * lw[k];
    }
    let scale = (f.sobolev_norm_sq() * g.sobolev_norm_sq()).sqrt().max(f64::MIN_POSITIVE);
    Ok(ResolutionIdentity {
        lhs: lebesgue,
        rhs,
        projector_form: projector,
        phase_space_form: phase,
        rel_error: (lebesgue - rhs).norm() / scale,
        form_spread: (lebesgue - projector).norm().max((lebesgue - phase).norm()) / scale,
    })
}

/// One row of the phase-space table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseSpaceRow {
    pub x: f64,
    /// Colour in cycles per unit length.
    pub nu: f64,
    pub t_prime: f64,
    pub intensity: f64,
}

/// `|f̃(x, it′)|²` tabulated over `(x, ν)` with `t′ = (s + 1)/(4πν)`.
pub fn phase_space(sol: &WaveSolution, xs: &[f64], nus: &[f64]) -> Result<Vec<PhaseSpaceRow>> {
    if nus.iter().any(|n| *n == 0.0 || !n.is_finite()) {
        return invalid("colours must be finite and nonzero");
    }
    let s = sol.s as f64;
    let mut pts = Vec::with_capacity(xs.len() * nus.len());
    for &nu in nus {
        for &x in xs {
            pts.push(EuclideanPoint::new(x, (s + 1.0) / (4.0 * PI * nu)));
        }
    }
    let vals = euclidean_ast(sol, &pts);
    Ok(pts
        .iter()
        .zip(&vals)
        .map(|(q, v)| PhaseSpaceRow {
            x: q.x,
            nu: (s + 1.0) / (4.0 * PI * q.t_prime),
            t_prime: q.t_prime,
            intensity: v.norm_sqr(),
        })
        .collect())
}

/// Five-point Laplacian `(∂x² + ∂t′²) f̃` at `z` with step `h`.
pub fn harmonic_residual(sol: &WaveSolution, z: EuclideanPoint, h: f64) -> Result<C64> {
    if !(h > 0.0) || (z.t_prime.abs() <= h) {
        return invalid("step must be positive and keep the stencil off t′ = 0");
    }
    let pts = [
        z,
        EuclideanPoint::new(z.x + h, z.t_prime),
        EuclideanPoint::new(z.x - h, z.t_prime),
        EuclideanPoint::new(z.x, z.t_prime + h),
        EuclideanPoint::new(z.x, z.t_prime - h),
    ];
    let v = euclidean_ast(sol, &pts);
    Ok((v[1] + v[2] + v[3] + v[4] - 4.0 * v[0]) / (h * h))
}
