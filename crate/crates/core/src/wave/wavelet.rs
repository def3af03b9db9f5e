use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use super::euclid::{n_s, EuclideanPoint};
use super::solution::{default_p_axis, WaveSolution};
use crate::error::{invalid, Result};
use crate::grid::Grid;
use crate::window::theta;

fn nonzero_t(t: f64) -> Result<()> {
    if t == 0.0 || !t.is_finite() {
        invalid("t′ must be finite and nonzero")
    } else {
        Ok(())
    }
}

/// `‖e_z‖²_s = 2Γ(s+1)/(4π|t′|)^{s+1}`.
pub fn ez_norm_sq(s: u32, t_prime: f64) -> f64 {
    2.0 * gamma(s as f64 + 1.0) / (4.0 * PI * t_prime.abs()).powi(s as i32 + 1)
}

/// `ê_{z+}(p) = θ(pt′)|p|^s e^{−2πipz*}`, `ê_{z−}(p) = θ(−pt′)|p|^s e^{−2πipz}`.
pub fn wavelet_ez(s: u32, z: EuclideanPoint, p_grid: &Grid) -> Result<WaveSolution> {
    nonzero_t(z.t_prime)?;
    let zc = z.z();
    let mi = C64::new(0.0, -2.0 * PI);
    let t = z.t_prime;
    WaveSolution::from_fn(
        p_grid.clone(),
        s,
        |p| half_mode(theta(p * t), p, s, mi * p * zc.conj()),
        |p| half_mode(theta(-p * t), p, s, mi * p * zc),
    )
}

/// `θ |p|^s e^{arg}`, skipping the exponential where `θ = 0` since it grows there.
fn half_mode(th: f64, p: f64, s: u32, arg: C64) -> C64 {
    if th == 0.0 {
        C64::default()
    } else {
        th * p.abs().powi(s as i32) * arg.exp()
    }
}

/// `φ̂₊(p) = θ(p) p^s e^{−2πp}`, `φ̂₋ = 0`: the `+` part of `e_i`.
pub fn mother_wavelet(s: u32, p_grid: &Grid) -> Result<WaveSolution> {
    if s == 0 {
        return invalid("the mother wavelet needs s ≥ 1");
    }
    WaveSolution::from_fn(
        p_grid.clone(),
        s,
        |p| half_mode(theta(p), p, s, C64::new(-2.0 * PI * p, 0.0)),
        |_| C64::default(),
    )
}

/// The same wavelet with the Sobolev weight absorbed:
/// `Φ̂₊(p) = θ(p) p^{s/2} e^{−2πp}`.
pub fn mother_wavelet_l2(s: u32, p_grid: &Grid) -> Result<Vec<C64>> {
    if s == 0 {
        return invalid("the mother wavelet needs s ≥ 1");
    }
    if p_grid.ndim() != 1 {
        return invalid("frequency grid must be one-dimensional");
    }
    Ok(p_grid.dims[0]
        .nodes()
        .iter()
        .map(|&p| C64::new(theta(p) * p.abs().powf(s as f64 / 2.0) * (-2.0 * PI * p).exp(), 0.0))
        .collect())
}

/// Left-moving part `e_{z₁+}(x, t)` in closed form: `Γ(s+1)/(2π(t₁′ − i(u − x₁)))^{s+1}`
/// for `t₁′ > 0` and `Γ(s+1)/(2π(|t₁′| + i(u − x₁)))^{s+1}` for `t₁′ < 0`, `u = x + t`.
pub fn ez_spacetime(s: u32, z1: EuclideanPoint, pts: &[(f64, f64)]) -> Result<Vec<C64>> {
    nonzero_t(z1.t_prime)?;
    let g = gamma(s as f64 + 1.0);
    let t = z1.t_prime;
    Ok(pts
        .iter()
        .map(|&(x, tt)| {
            let u = x + tt - z1.x;
            let den = if t > 0.0 {
                C64::new(2.0 * PI * t, -2.0 * PI * u)
            } else {
                C64::new(-2.0 * PI * t, 2.0 * PI * u)
            };
            g / den.powi(s as i32 + 1)
        })
        .collect())
}

/// Closed-form colour and bandwidth together with grid moments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColorStats {
    pub nu: f64,
    pub delta_nu: f64,
    pub grid_nu_plus: f64,
    pub grid_nu_minus: f64,
    pub grid_delta_nu: f64,
    pub rel_error: f64,
}

/// `ν_s = (s+1)/(4πt′)`, `Δν_s = √(s+1)/(4π|t′|)`, cross-checked by moments
/// of `|ê_z±|²` in the measure `|p|^{−s} dp`.
pub fn color_stats(s: u32, t_prime: f64) -> Result<ColorStats> {
    nonzero_t(t_prime)?;
    let sf = s as f64;
    let scale = 4.0 * PI * t_prime.abs();
    let nu = (sf + 1.0) / (4.0 * PI * t_prime);
    let delta_nu = (sf + 1.0).sqrt() / scale;
    let ax = default_p_axis((60.0 + 2.0 * sf) / scale, 1.0 / (256.0 * scale))?;
    let e = wavelet_ez(s, EuclideanPoint::new(0.0, t_prime), &Grid::from_axis(ax))?;
    let w = e.weights();
    let ps = e.p();
    let moments = |c: &[C64], sign: f64| -> (f64, f64, f64) {
        let (mut m0, mut m1, mut m2) = (0.0, 0.0, 0.0);
        for k in 0..ps.len() {
            let d = w[k] * c[k].norm_sqr();
            m0 += d;
            m1 += d * sign * ps[k];
            m2 += d * ps[k] * ps[k];
        }
        (m0, m1 / m0, m2 / m0)
    };
    let (_, np, p2) = moments(&e.plus, 1.0);
    let (_, nm, _) = moments(&e.minus, -1.0);
    let gd = (p2 - np * np).sqrt();
    let rel_error = ((np - nu) / nu).abs().max(((nm - nu) / nu).abs()).max(((gd - delta_nu) / delta_nu).abs());
    Ok(ColorStats {
        nu,
        delta_nu,
        grid_nu_plus: np,
        grid_nu_minus: nm,
        grid_delta_nu: gd,
        rel_error,
    })
}

/// `K(z₁, z) = ⟨⟨e_{z₁}, e_z⟩⟩_s
///   = 2θ(t₁′t′)Γ(s+1)/(2π|t₁′+t′|)^{s+1} · Re[(1 − i(x₁−x)/(t₁′+t′))^{−s−1}]`.
pub fn reproducing_kernel(s: u32, z1: EuclideanPoint, z: EuclideanPoint) -> Result<C64> {
    nonzero_t(z1.t_prime)?;
    nonzero_t(z.t_prime)?;
    Ok(C64::new(kernel_value(s, z1, z), 0.0))
}

fn kernel_value(s: u32, z1: EuclideanPoint, z: EuclideanPoint) -> f64 {
    if z1.t_prime * z.t_prime <= 0.0 {
        return 0.0;
    }
    let tt = z1.t_prime + z.t_prime;
    let pref = 2.0 * gamma(s as f64 + 1.0) / (2.0 * PI * tt.abs()).powi(s as i32 + 1);
    pref * C64::new(1.0, -(z1.x - z.x) / tt).powi(-(s as i32) - 1).re
}

/// `k(z, w) = ⟨e_{z+}, e_{w+}⟩_s`: `Γ(s+1)/(∓2πi(z − w*))^{s+1}` on `ℂ±`, zero across.
pub fn plus_kernel(s: u32, z: EuclideanPoint, w: EuclideanPoint) -> C64 {
    if z.t_prime * w.t_prime <= 0.0 {
        return C64::default();
    }
    let d = z.z() - w.z().conj();
    let sign = if z.t_prime > 0.0 { -1.0 } else { 1.0 };
    gamma(s as f64 + 1.0) / (C64::new(0.0, sign * 2.0 * PI) * d).powi(s as i32 + 1)
}

/// Gram matrix `K(z_i, z_j)`.
pub fn gram_matrix(s: u32, pts: &[EuclideanPoint]) -> Result<DMatrix<f64>> {
    for p in pts {
        nonzero_t(p.t_prime)?;
    }
    Ok(DMatrix::from_fn(pts.len(), pts.len(), |i, j| kernel_value(s, pts[i], pts[j])))
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    m.clone().symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Anything whose AST can be evaluated at a point of `ℂ \ ℝ`.
pub trait AstFunction: Sync {
    fn degree(&self) -> u32;
    fn ast(&self, z: C64) -> C64;
}

impl AstFunction for WaveSolution {
    fn degree(&self) -> u32 {
        self.s
    }

    fn ast(&self, z: C64) -> C64 {
        super::euclid::euclidean_ast(self, &[EuclideanPoint::from_z(z)])[0]
    }
}

/// Whether atoms are full wavelets `e_z` or their `+` parts `e_{z+}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomKind {
    Full,
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub coeff: C64,
    pub z: EuclideanPoint,
}

/// A finite combination of wavelets, with exact AST and norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomSolution {
    pub s: u32,
    pub kind: AtomKind,
    pub atoms: Vec<Atom>,
}

impl AtomSolution {
    pub fn new(s: u32, kind: AtomKind, atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            nonzero_t(a.z.t_prime)?;
        }
        Ok(AtomSolution { s, kind, atoms })
    }

    fn kern(&self, z: EuclideanPoint, w: EuclideanPoint) -> C64 {
        match self.kind {
            AtomKind::Full => C64::new(kernel_value(self.s, z, w), 0.0),
            AtomKind::Plus => plus_kernel(self.s, z, w),
        }
    }

    /// Exact `‖f‖²_s = Σ c_j* c_k ⟨e_{z_j}, e_{z_k}⟩`.
    pub fn norm_sq(&self) -> f64 {
        let mut acc = C64::default();
        for a in &self.atoms {
            for b in &self.atoms {
                acc += a.coeff.conj() * b.coeff * self.kern(a.z, b.z);
            }
        }
        acc.re
    }

    /// Exact `⟨⟨self, other⟩⟩_s`.
    pub fn inner(&self, other: &AtomSolution) -> Result<C64> {
        if self.s != other.s || self.kind != other.kind {
            return invalid("atom solutions differ in degree or kind");
        }
        let mut acc = C64::default();
        for a in &self.atoms {
            for b in &other.atoms {
                acc += a.coeff.conj() * b.coeff * self.kern(a.z, b.z);
            }
        }
        Ok(acc)
    }

    /// Spectra sampled on `p_grid`.
    pub fn to_solution(&self, p_grid: &Grid) -> Result<WaveSolution> {
        let mut out = WaveSolution::zeros(p_grid.clone(), self.s)?;
        for a in &self.atoms {
            out = out.add(&wavelet_ez(self.s, a.z, p_grid)?.scale(a.coeff))?;
        }
        Ok(match self.kind {
            AtomKind::Full => out,
            AtomKind::Plus => out.plus_only(),
        })
    }

    /// Smallest `|t′|` among the atoms.
    pub fn min_t(&self) -> f64 {
        self.atoms.iter().map(|a| a.z.t_prime.abs()).fold(f64::INFINITY, f64::min)
    }
}

impl AstFunction for AtomSolution {
    fn degree(&self) -> u32 {
        self.s
    }

    /// `f̃(z) = ⟨⟨e_z, f⟩⟩ = Σ c_k ⟨e_z, e_{z_k}⟩`.
    fn ast(&self, z: C64) -> C64 {
        let z = EuclideanPoint::from_z(z);
        self.atoms.iter().map(|a| a.coeff * self.kern(z, a.z)).sum()
    }
}

/// Quadrature over `ℂ \ ℝ` with `x = x0 sinh ξ` and `t′ = ±e^η`, uniform in
/// `(ξ, η)`. Nodes run over the upper half-plane first, `η` outer, `ξ` inner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneDesign {
    pub x0: f64,
    pub xi_max: f64,
    pub xi_count: usize,
    pub eta_min: f64,
    pub eta_max: f64,
    pub eta_count: usize,
}

impl Default for PlaneDesign {
    fn default() -> Self {
        PlaneDesign {
            x0: 1.0,
            xi_max: 10.0,
            xi_count: 401,
            eta_min: (1e-5f64).ln(),
            eta_max: (1e5f64).ln(),
            eta_count: 461,
        }
    }
}

impl PlaneDesign {
    pub fn validate(&self) -> Result<()> {
        if !(self.x0 > 0.0 && self.xi_max > 0.0 && self.eta_max > self.eta_min) || self.xi_count < 2 || self.eta_count < 2 {
            return invalid("plane design needs x0, ξ_max > 0, η_max > η_min and at least 2 nodes per axis");
        }
        Ok(())
    }

    pub fn xi_step(&self) -> f64 {
        2.0 * self.xi_max / (self.xi_count - 1) as f64
    }

    pub fn eta_step(&self) -> f64 {
        (self.eta_max - self.eta_min) / (self.eta_count - 1) as f64
    }

    pub fn len(&self) -> usize {
        2 * self.xi_count * self.eta_count
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Flat index of node `(half, j_η, i_ξ)`, `half = 0` for `t′ > 0`.
    pub fn index(&self, half: usize, j: usize, i: usize) -> usize {
        (half * self.eta_count + j) * self.xi_count + i
    }

    pub fn xi(&self, i: usize) -> f64 {
        -self.xi_max + i as f64 * self.xi_step()
    }

    pub fn eta(&self, j: usize) -> f64 {
        self.eta_min + j as f64 * self.eta_step()
    }

    pub fn point(&self, flat: usize) -> EuclideanPoint {
        let i = flat % self.xi_count;
        let j = (flat / self.xi_count) % self.eta_count;
        let half = flat / (self.xi_count * self.eta_count);
        let sign = if half == 0 { 1.0 } else { -1.0 };
        EuclideanPoint::new(self.x0 * self.xi(i).sinh(), sign * self.eta(j).exp())
    }

    pub fn points(&self) -> Vec<EuclideanPoint> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }

    /// Area weights `dx dt′ = x0 cosh ξ · e^η dξ dη` (trapezoid).
    pub fn weights(&self) -> Vec<f64> {
        let (hx, he) = (self.xi_step(), self.eta_step());
        (0..self.len())
            .map(|k| {
                let i = k % self.xi_count;
                let j = (k / self.xi_count) % self.eta_count;
                let ei = if i == 0 || i + 1 == self.xi_count { 0.5 } else { 1.0 };
                let ej = if j == 0 || j + 1 == self.eta_count { 0.5 } else { 1.0 };
                ei * ej * hx * he * self.x0 * self.xi(i).cosh() * self.eta(j).exp()
            })
            .collect()
    }

    pub fn sample(&self, f: &dyn AstFunction) -> Vec<C64> {
        let pts = self.points();
        pts.par_iter().map(|p| f.ast(p.z())).collect()
    }
}

/// `N_s ∫∫ |t′|^{s−1} |F|² dx dt′` for values sampled on the design, skipping
/// entries whose mask is false.
pub fn plane_norm_sq(design: &PlaneDesign, values: &[C64], mask: Option<&[bool]>, s: u32) -> Result<f64> {
    design.validate()?;
    if values.len() != design.len() {
        return Err(crate::error::Error::Shape { expected: design.len(), found: values.len() });
    }
    let ns = n_s(s)?;
    let w = design.weights();
    Ok(ns
        * (0..values.len())
            .filter(|&k| mask.map_or(true, |m| m[k]))
            .map(|k| {
                let t = design.point(k).t_prime.abs();
                w[k] * t.powi(s as i32 - 1) * values[k].norm_sqr()
            })
            .sum::<f64>())
}

/// `max_probe |F(z₁) − N_s ∫∫ |t′|^{s−1} K(z₁, z) F(z)| / max|F|`.
pub fn consistency_check(design: &PlaneDesign, values: &[C64], s: u32, probes: &[usize]) -> Result<f64> {
    design.validate()?;
    if values.len() != design.len() {
        return Err(crate::error::Error::Shape { expected: design.len(), found: values.len() });
    }
    if probes.iter().any(|&k| k >= design.len()) {
        return invalid("probe index outside the design");
    }
    let ns = n_s(s)?;
    let peak = values.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    let pts = design.points();
    let w: Vec<f64> = design
        .weights()
        .iter()
        .zip(&pts)
        .map(|(w, p)| w * p.t_prime.abs().powi(s as i32 - 1))
        .collect();
    let worst = probes
        .par_iter()
        .map(|&k| {
            let z1 = pts[k];
            let proj: C64 = (0..pts.len()).map(|j| w[j] * kernel_value(s, z1, pts[j]) * values[j]).sum();
            (values[k] - ns * proj).norm()
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst / peak)
}

/// Design nodes closest to the given points.
pub fn nearest_nodes(design: &PlaneDesign, pts: &[EuclideanPoint]) -> Vec<usize> {
    pts.iter()
        .map(|p| {
            let half = if p.t_prime > 0.0 { 0 } else { 1 };
            let i = (((p.x / design.x0).asinh() + design.xi_max) / design.xi_step()).round();
            let j = ((p.t_prime.abs().ln() - design.eta_min) / design.eta_step()).round();
            let i = i.clamp(0.0, (design.xi_count - 1) as f64) as usize;
            let j = j.clamp(0.0, (design.eta_count - 1) as f64) as usize;
            design.index(half, j, i)
        })
        .collect()
}
