//! The Analytic-Signal Transform `f̃(x + iy)`, analytic signals, directional
//! Hilbert transforms and the Fourier-space kernel `δ̃`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::{Axis, Grid};
use crate::spectral::{dft, idft, SampledSignal, SpectralSignal};
use crate::window::theta;

/// `z = x + iy ∈ ℂⁿ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl ComplexPoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        ComplexPoint { x, y }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ASTField {
    pub points: Vec<ComplexPoint>,
    pub values: Vec<C64>,
}

/// The ε schedule used for boundary limits.
pub const EPS_SCHEDULE: [f64; 3] = [1e-1, 1e-2, 1e-3];

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn check_dir(y: &[f64], n: usize) -> Result<()> {
    if y.len() != n {
        return Err(Error::Invalid(format!("direction has {} components, signal is {n}-d", y.len())));
    }
    if norm(y) <= 1e-14 {
        return invalid("direction y = 0 is not allowed here");
    }
    Ok(())
}

/// Positive- and negative-frequency parts `f± = idft(θ(±p) f̂)`.
///
/// The DC bin is split equally and, for even counts, so is the Nyquist bin,
/// which stands for both `±p_max`.
pub fn analytic_signal_1d(f: &SampledSignal) -> Result<(SampledSignal, SampledSignal)> {
    if f.ndim() != 1 {
        return invalid(format!("analytic_signal_1d needs a 1-d signal, got {}-d", f.ndim()));
    }
    let spec = dft(f)?;
    let even = f.grid.dims[0].count % 2 == 0;
    let ax = spec.grid.dims[0];
    let mask = |j: usize| if even && j == 0 { 0.5 } else { theta(ax.node(j)) };
    let plus: Vec<C64> = spec.values.iter().enumerate().map(|(j, v)| v * mask(j)).collect();
    let minus: Vec<C64> = spec.values.iter().zip(&plus).map(|(v, p)| v - p).collect();
    Ok((
        idft(&SpectralSignal::with_grids(spec.grid.clone(), spec.spatial.clone(), plus)?)?,
        idft(&SpectralSignal::with_grids(spec.grid, spec.spatial, minus)?)?,
    ))
}

/// `f̃(z) = Σ_p θ(p·y) e^{2πip·z} f̂(p) Δp`; at `y = 0` this is `½f(x)`.
pub fn ast_spectral(f: &SampledSignal, pts: &[ComplexPoint]) -> Result<ASTField> {
    let n = f.ndim();
    for z in pts {
        if z.x.len() != n || z.y.len() != n {
            return invalid(format!("point dimension does not match the {n}-d signal"));
        }
        if z.x.iter().chain(&z.y).any(|v| !v.is_finite()) {
            return invalid("non-finite evaluation point");
        }
    }
    let spec = dft(f)?;
    let cell = spec.grid.cell();
    let modes: Vec<(Vec<f64>, C64)> = spec
        .values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm_sqr() > 0.0)
        .map(|(k, v)| (spec.grid.point(k), v * cell))
        .collect();
    let values = pts
        .par_iter()
        .map(|z| {
            modes
                .iter()
                .map(|(p, c)| {
                    let py = dot(p, &z.y);
                    let m = theta(py);
                    if m == 0.0 {
                        C64::new(0.0, 0.0)
                    } else {
                        c * C64::from_polar(m * (-2.0 * PI * py).exp(), 2.0 * PI * dot(p, &z.x))
                    }
                })
                .sum()
        })
        .collect();
    Ok(ASTField {
        points: pts.to_vec(),
        values,
    })
}

/// `f̃(x + iy)` for every grid `x` at a fixed `y`.
pub fn ast_grid(f: &SampledSignal, y: &[f64]) -> Result<SampledSignal> {
    if y.len() != f.ndim() {
        return invalid("direction dimension does not match the signal");
    }
    let spec = dft(f)?;
    idft(&spec.map(|p, v| {
        let py = dot(p, y);
        v * theta(py) * if py > 0.0 { (-2.0 * PI * py).exp() } else { 1.0 }
    }))
}

/// `(1/2πi) ∫ dτ f(x + τy)/(τ − i)` by the trapezoid rule on `tau_grid`.
pub fn ast_line_integral(f: &SampledSignal, z: &ComplexPoint, tau_grid: &Grid) -> Result<C64> {
    check_dir(&z.y, f.ndim())?;
    if z.x.len() != f.ndim() {
        return invalid("point dimension does not match the signal");
    }
    if tau_grid.ndim() != 1 || !tau_grid.dims[0].is_symmetric() {
        return invalid("τ grid must be one-dimensional and symmetric about 0");
    }
    let ax = tau_grid.dims[0];
    let spec = dft(f)?;
    let line = spec.eval_line(&z.x, &z.y, ax.origin, ax.spacing, ax.count);
    let last = ax.count - 1;
    let sum: C64 = line
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let w = if k == 0 || k == last { 0.5 } else { 1.0 };
            w * v / C64::new(ax.node(k), -1.0)
        })
        .sum();
    Ok(sum * ax.spacing / (2.0 * PI * C64::i()))
}

/// Symmetric `u` nodes `±(k + ½)Δu`, `k < K`, with half-width `L = K Δu`
/// large enough that the PV tail `|f|_∞/L` is below `tol`.
pub fn hilbert_u_grid(f: &SampledSignal, y: &[f64], tol: f64) -> Result<Grid> {
    check_dir(y, f.ndim())?;
    if !(tol > 0.0) {
        return invalid("tolerance must be positive");
    }
    let dual = f.grid.dual();
    let xi_max = dual
        .dims
        .iter()
        .zip(y)
        .map(|(a, c)| a.origin.abs().max(a.last().abs()) * c.abs())
        .sum::<f64>()
        .max(1e-300);
    let du = 0.25 / xi_max;
    let half = f.max_abs().max(1e-300) / tol;
    let k = (half / du).ceil() as usize;
    Ok(Grid::from_axis(Axis::symmetric(2 * k, du)?))
}

/// `H_y f(x) = (1/π) PV ∫ du f(x − uy)/u` by symmetric pairs on `u_grid`.
///
/// The pair sum `Σ Δu [f(x − u_k y) − f(x + u_k y)]/u_k` is applied to
/// the trigonometric interpolant of `f`, where it acts on each mode as the
/// multiplier `−(2i/π) Σ Δu sin(2π(p·y)u_k)/u_k`.
pub fn directional_hilbert(f: &SampledSignal, y: &[f64], u_grid: &Grid) -> Result<SampledSignal> {
    check_dir(y, f.ndim())?;
    if u_grid.ndim() != 1 {
        return invalid("u grid must be one-dimensional");
    }
    let ax = u_grid.dims[0];
    if !ax.is_symmetric() {
        return invalid("u grid must be symmetric about 0");
    }
    let nodes: Vec<f64> = ax.nodes().into_iter().filter(|&u| u > 0.0).collect();
    if ax.nodes().iter().any(|u| u.abs() < 1e-14 * ax.spacing) {
        return invalid("u grid must not contain the singular node u = 0");
    }
    let spec = dft(f)?;
    let xis: Vec<f64> = (0..spec.grid.len()).map(|k| dot(&spec.grid.point(k), y)).collect();
    let mut order: Vec<usize> = (0..xis.len()).collect();
    order.sort_by(|&a, &b| xis[a].total_cmp(&xis[b]));
    // distinct ξ values, each multiplier computed once
    let mut uniq: Vec<f64> = Vec::new();
    let mut slot = vec![0usize; xis.len()];
    for &k in &order {
        let fresh = uniq.last().map_or(true, |&u| (xis[k] - u).abs() > 1e-12 * (1.0 + u.abs()));
        if fresh {
            uniq.push(xis[k]);
        }
        slot[k] = uniq.len() - 1;
    }
    let du = ax.spacing;
    let mult: Vec<C64> = uniq
        .par_iter()
        .map(|&xi| {
            let s: f64 = nodes.iter().map(|u| (2.0 * PI * xi * u).sin() / u).sum();
            C64::new(0.0, -2.0 / PI * du * s)
        })
        .collect();
    let out: Vec<C64> = spec.values.iter().enumerate().map(|(k, v)| v * mult[slot[k]]).collect();
    idft(&SpectralSignal::with_grids(spec.grid, spec.spatial, out)?)
}

/// `idft(−i sgn(p·y) f̂)`.
pub fn hilbert_spectral(f: &SampledSignal, y: &[f64]) -> Result<SampledSignal> {
    check_dir(y, f.ndim())?;
    let spec = dft(f)?;
    idft(&spec.map(|p, v| {
        let s = dot(p, y);
        let sg = if s > 0.0 { 1.0 } else if s < 0.0 { -1.0 } else { 0.0 };
        v * C64::new(0.0, -sg)
    }))
}

/// `i[f̃(x − iεy) − f̃(x + iεy)]`.
pub fn hilbert_eps(f: &SampledSignal, y: &[f64], eps: f64) -> Result<SampledSignal> {
    check_dir(y, f.ndim())?;
    let (yp, ym): (Vec<f64>, Vec<f64>) = y.iter().map(|c| (eps * c, -eps * c)).unzip();
    let plus = ast_grid(f, &yp)?;
    let minus = ast_grid(f, &ym)?;
    minus.add(&plus.scale(C64::new(-1.0, 0.0))).map(|d| d.scale(C64::i()))
}

/// Boundary values at each ε with sup-norm changes between successive ε.
#[derive(Debug, Clone)]
pub struct BoundaryRecovery {
    pub signal: SampledSignal,
    pub eps: Vec<f64>,
    /// `sup|g_{ε_k} − g_{ε_{k−1}}|` for `k ≥ 1`.
    pub changes: Vec<f64>,
}

fn check_schedule(eps: &[f64]) -> Result<()> {
    if eps.is_empty() {
        return invalid("ε list is empty");
    }
    if eps.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
        return invalid("ε values must be positive");
    }
    if eps.windows(2).any(|w| w[1] >= w[0]) {
        return invalid("ε list must be strictly decreasing");
    }
    if *eps.last().unwrap() > 1e-3 {
        return invalid("ε list must reach 1e-3 or below");
    }
    Ok(())
}

fn sup_diff(a: &SampledSignal, b: &SampledSignal) -> f64 {
    a.values.iter().zip(&b.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `f = lim_{ε→0⁺} [f̃(x + iεy) + f̃(x − iεy)]`, evaluated on the schedule.
pub fn boundary_recover(f: &SampledSignal, y: &[f64], eps_list: &[f64]) -> Result<BoundaryRecovery> {
    check_dir(y, f.ndim())?;
    check_schedule(eps_list)?;
    let mut prev: Option<SampledSignal> = None;
    let mut changes = Vec::new();
    for &e in eps_list {
        let (yp, ym): (Vec<f64>, Vec<f64>) = y.iter().map(|c| (e * c, -e * c)).unzip();
        let g = ast_grid(f, &yp)?.add(&ast_grid(f, &ym)?)?;
        if let Some(p) = &prev {
            changes.push(sup_diff(&g, p));
        }
        prev = Some(g);
    }
    Ok(BoundaryRecovery {
        signal: prev.unwrap(),
        eps: eps_list.to_vec(),
        changes,
    })
}

/// Five-point central derivative of `g` at 0.
fn d5(g: impl Fn(f64) -> C64, h: f64) -> C64 {
    (g(-2.0 * h) - 8.0 * g(-h) + 8.0 * g(h) - g(2.0 * h)) / (12.0 * h)
}

/// `Σ_k w_k (∂/∂x_k + i ∂/∂y_k) f̃` at `z`, by five-point stencils along `w`.
pub fn cr_residual_along(f: &SampledSignal, z: &ComplexPoint, w: &[f64], step: f64) -> Result<C64> {
    check_dir(&z.y, f.ndim())?;
    if w.len() != f.ndim() {
        return invalid("direction dimension does not match the signal");
    }
    if !(step > 0.0) {
        return invalid("step must be positive");
    }
    let offsets = [-2.0, -1.0, 1.0, 2.0];
    let mut pts = Vec::with_capacity(8);
    for o in offsets {
        let x: Vec<f64> = z.x.iter().zip(w).map(|(a, b)| a + o * step * b).collect();
        pts.push(ComplexPoint::new(x, z.y.clone()));
    }
    for o in offsets {
        let y: Vec<f64> = z.y.iter().zip(w).map(|(a, b)| a + o * step * b).collect();
        pts.push(ComplexPoint::new(z.x.clone(), y));
    }
    let v = ast_spectral(f, &pts)?.values;
    let at = |base: usize, t: f64| {
        let idx = match t as i32 {
            -2 => 0,
            -1 => 1,
            1 => 2,
            _ => 3,
        };
        v[base + idx]
    };
    let dx = d5(|t| at(0, t / step), step);
    let dy = d5(|t| at(4, t / step), step);
    Ok(dx + C64::i() * dy)
}

/// `2y·∂̄f̃(z)`, the directional Cauchy–Riemann residual.
pub fn cr_residual(f: &SampledSignal, z: &ComplexPoint, step: f64) -> Result<C64> {
    cr_residual_along(f, z, &z.y.clone(), step)
}

/// `∂f̃/∂z*` for a 1-d signal.
pub fn cr_residual_1d(f: &SampledSignal, z: &ComplexPoint, step: f64) -> Result<C64> {
    if f.ndim() != 1 {
        return invalid("cr_residual_1d needs a 1-d signal");
    }
    Ok(0.5 * cr_residual_along(f, z, &[1.0], step)?)
}

/// `δ̃(q − ip)` as the constraint `QR⁻¹q = 0` and the factor
/// `1/(2π(|p| + iPR⁻¹q))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaTilde {
    pub constraint: Vec<f64>,
    pub factor: C64,
}

/// A proper rotation with `R e₁ = p/|p|` (`n ≥ 2`): a Householder
/// reflection composed with a sign flip of the last column.
pub fn aligning_rotation(p: &[f64]) -> Result<DMatrix<f64>> {
    let n = p.len();
    let r = norm(p);
    if n < 2 {
        return invalid("aligning rotations need n ≥ 2");
    }
    if r <= 1e-14 {
        return invalid("p = 0 has no direction");
    }
    let e = DVector::from_fn(n, |i, _| if i == 0 { 1.0 } else { 0.0 });
    let u = DVector::from_column_slice(p) / r;
    let w = &e - &u;
    let mut h = DMatrix::<f64>::identity(n, n);
    let wn = w.norm_squared();
    if wn > 1e-30 {
        h -= (&w * w.transpose()) * (2.0 / wn);
    } else {
        // p already along e₁; flip one column so the flip below restores det +1
        h[(n - 1, n - 1)] = -1.0;
    }
    let mut col = h.column_mut(n - 1);
    col *= -1.0;
    Ok(h)
}

/// Evaluates `δ̃(q − ip)`. `rotation` defaults to [`aligning_rotation`]; in
/// one dimension the closed form `sgn(p)/(2π(p + iq))` is returned with an
/// empty constraint.
pub fn delta_tilde(q: &[f64], p: &[f64], rotation: Option<&DMatrix<f64>>) -> Result<DeltaTilde> {
    let n = p.len();
    if q.len() != n || n == 0 {
        return invalid("p and q must have the same positive dimension");
    }
    if norm(p) <= 1e-14 {
        return invalid("δ̃(q − ip) is defined for p ≠ 0 only");
    }
    if n == 1 {
        let s = p[0].signum();
        return Ok(DeltaTilde {
            constraint: vec![],
            factor: s / (2.0 * PI * C64::new(p[0], q[0])),
        });
    }
    let r = match rotation {
        Some(r) => {
            crate::radon::check_rotation(r)?;
            let pn = norm(p);
            let dev = (0..n).map(|i| (r[(i, 0)] - p[i] / pn).abs()).fold(0.0, f64::max);
            if dev > 1e-10 {
                return invalid("rotation does not map e₁ to p/|p|");
            }
            r.clone()
        }
        None => aligning_rotation(p)?,
    };
    let k = r.transpose() * DVector::from_column_slice(q);
    Ok(DeltaTilde {
        constraint: k.iter().skip(1).copied().collect(),
        factor: 1.0 / (2.0 * PI * C64::new(norm(p), k[0])),
    })
}
