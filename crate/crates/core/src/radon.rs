//! The d-dimensional windowed Radon transform over rigid motions `A = vRJ`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::grid::{Grid, LogAxis};
use crate::quad::gauss_legendre;
use crate::spectral::{dft, idft, SampledSignal, SpectralSignal};
use crate::window::{rigid_admissibility, Constant, Window};
use crate::xray::{synthesize, Reconstruction};

const ORTHO_TOL: f64 = 1e-12;

/// A speed `v > 0` and a proper rotation `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidMotion {
    pub speed: f64,
    pub rotation: DMatrix<f64>,
}

impl RigidMotion {
    pub fn new(speed: f64, rotation: DMatrix<f64>) -> Result<Self> {
        if !(speed > 0.0 && speed.is_finite()) {
            return invalid(format!("speed must be positive, got {speed}"));
        }
        check_rotation(&rotation)?;
        Ok(RigidMotion { speed, rotation })
    }

    pub fn n(&self) -> usize {
        self.rotation.nrows()
    }

    /// `(v₁v₂, R₁R₂)`.
    pub fn compose(&self, other: &RigidMotion) -> Result<RigidMotion> {
        RigidMotion::new(self.speed * other.speed, &self.rotation * &other.rotation)
    }
}

pub fn check_rotation(r: &DMatrix<f64>) -> Result<()> {
    if !r.is_square() || r.nrows() == 0 {
        return invalid(format!("rotation must be square, got {}×{}", r.nrows(), r.ncols()));
    }
    let n = r.nrows();
    let dev = (r.transpose() * r - DMatrix::<f64>::identity(n, n)).amax();
    if dev >= ORTHO_TOL {
        return invalid(format!("matrix is not orthogonal (‖RᵀR − I‖ = {dev:.3e})"));
    }
    let det = r.determinant();
    if (det - 1.0).abs() > ORTHO_TOL {
        return invalid(format!("rotation has determinant {det}, expected 1"));
    }
    Ok(())
}

/// Rotation by `a` in the plane.
pub fn rotation2(a: f64) -> DMatrix<f64> {
    let (s, c) = a.sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
}

/// `R_z(α) R_y(β) R_z(γ)`.
pub fn rotation_zyz(alpha: f64, beta: f64, gamma: f64) -> DMatrix<f64> {
    let rz = |a: f64| {
        let (s, c) = a.sin_cos();
        DMatrix::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0])
    };
    let (s, c) = beta.sin_cos();
    let ry = DMatrix::from_row_slice(3, 3, &[c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c]);
    rz(alpha) * ry * rz(gamma)
}

/// `A = v R J`: the first `d` columns of `R` scaled by `v`.
pub fn motion_matrix(m: &RigidMotion, d: usize, n: usize) -> Result<DMatrix<f64>> {
    if d == 0 || d > n {
        return invalid(format!("need 1 ≤ d ≤ n, got d = {d}, n = {n}"));
    }
    if m.n() != n {
        return invalid(format!("motion acts on ℝ^{}, expected ℝ^{n}", m.n()));
    }
    Ok(m.rotation.columns(0, d) * m.speed)
}

/// Nodes and weights discretizing the normalized Haar measure on `SO(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationQuadrature {
    pub n: usize,
    pub nodes: Vec<DMatrix<f64>>,
    pub weights: Vec<f64>,
}

impl RotationQuadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The rule with every node replaced by `R₀R`; Haar invariance makes it
    /// an equally valid rule.
    pub fn rotated(&self, r0: &DMatrix<f64>) -> Result<RotationQuadrature> {
        check_rotation(r0)?;
        if r0.nrows() != self.n {
            return invalid("rotation dimension mismatch");
        }
        Ok(RotationQuadrature {
            n: self.n,
            nodes: self.nodes.iter().map(|r| r0 * r).collect(),
            weights: self.weights.clone(),
        })
    }

    /// `Σ w_k g(R_k)`.
    pub fn average(&self, g: impl Fn(&DMatrix<f64>) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(r, w)| w * g(r)).sum()
    }
}

/// Product rule on `SO(2)` or `SO(3)`.
///
/// `SO(2)`: angles `2πk/K`, weights `1/K`. `SO(3)`: Euler angles `ZYZ` with
/// `K` uniform nodes each in `α` and `γ` and `K/2` Gauss–Legendre nodes in
/// `cos β`.
pub fn so_n_quadrature(n: usize, resolution: usize) -> Result<RotationQuadrature> {
    if resolution < 4 {
        return invalid(format!("resolution must be at least 4, got {resolution}"));
    }
    let k = resolution;
    match n {
        2 => Ok(RotationQuadrature {
            n,
            nodes: (0..k).map(|j| rotation2(2.0 * PI * j as f64 / k as f64)).collect(),
            weights: vec![1.0 / k as f64; k],
        }),
        3 => {
            let (cb, wb) = gauss_legendre(k / 2);
            let mut nodes = Vec::with_capacity(k * k * (k / 2));
            let mut weights = Vec::with_capacity(nodes.capacity());
            for ia in 0..k {
                let a = 2.0 * PI * ia as f64 / k as f64;
                for (c, w) in cb.iter().zip(&wb) {
                    for ig in 0..k {
                        let g = 2.0 * PI * ig as f64 / k as f64;
                        nodes.push(rotation_zyz(a, c.acos(), g));
                        weights.push(0.5 * w / (k * k) as f64);
                    }
                }
            }
            Ok(RotationQuadrature { n, nodes, weights })
        }
        _ => Err(Error::Invalid(format!("rotation quadrature supports n ∈ {{2, 3}}, got {n}"))),
    }
}

/// Largest deviation of the rule's degree-≤4 moments from their Haar values.
pub fn haar_error(rule: &RotationQuadrature) -> f64 {
    let moments: Vec<(Box<dyn Fn(&DMatrix<f64>) -> f64>, f64)> = match rule.n {
        2 => vec![
            (Box::new(|r| r[(0, 0)]), 0.0),
            (Box::new(|r| r[(0, 0)].powi(2)), 0.5),
            (Box::new(|r| r[(0, 0)].powi(4)), 3.0 / 8.0),
            (Box::new(|r| r[(0, 0)].powi(2) * r[(0, 1)].powi(2)), 1.0 / 8.0),
            (Box::new(|r| r[(0, 0)].powi(3) * r[(1, 0)]), 0.0),
        ],
        _ => vec![
            (Box::new(|r| r[(0, 0)]), 0.0),
            (Box::new(|r| r[(0, 0)].powi(2)), 1.0 / 3.0),
            (Box::new(|r| r[(0, 0)].powi(4)), 1.0 / 5.0),
            (Box::new(|r| r[(0, 0)].powi(2) * r[(0, 1)].powi(2)), 1.0 / 15.0),
            (Box::new(|r| r[(1, 2)].powi(4)), 1.0 / 5.0),
            (Box::new(|r| r[(2, 2)].powi(2) * r[(1, 0)].powi(2)), 2.0 / 15.0),
            (Box::new(|r| r[(0, 0)] * r[(1, 1)] * r[(2, 2)]), 1.0 / 6.0),
        ],
    };
    let wsum: f64 = rule.weights.iter().sum();
    moments
        .iter()
        .map(|(g, exact)| (rule.average(g) - exact).abs())
        .fold((wsum - 1.0).abs(), f64::max)
}

/// One sample `f_h(x, A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadonEntry {
    pub x: Vec<f64>,
    pub motion: RigidMotion,
    pub value: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadonField {
    pub d: usize,
    pub entries: Vec<RadonEntry>,
    /// The `t` grid did not cover the window's support.
    pub truncated: bool,
}

/// `f_h(x, A) = ∫ dᵈt h(t)* f(x + At)` for raw `n×d` matrices.
pub fn radon_forward_matrix(
    f: &SampledSignal,
    h: &Window,
    pts: &[(Vec<f64>, DMatrix<f64>)],
    t_grid: &Grid,
) -> Result<(Vec<C64>, bool)> {
    let n = f.ndim();
    let d = t_grid.ndim();
    if h.dim != d {
        return invalid(format!("window `{}` is {}-d, t grid is {d}-d", h.label, h.dim));
    }
    if !h.has_time() {
        return invalid(format!("window `{}` has no time form", h.label));
    }
    for (x, a) in pts {
        if x.len() != n || a.nrows() != n || a.ncols() != d {
            return invalid(format!("expected x ∈ ℝ^{n} and an {n}×{d} matrix"));
        }
        let sv = a.clone().singular_values();
        let (lo, hi) = (sv.min(), sv.max());
        if !(lo > 1e-12 * hi.max(1e-300)) {
            return invalid("matrix A is rank-deficient");
        }
    }
    let half = t_grid
        .dims
        .iter()
        .map(|ax| ax.origin.abs().min(ax.last().abs()))
        .fold(f64::INFINITY, f64::min);
    let truncated = h.time_tail(half).map_or(true, |r| r > 1e-10);
    let spec = dft(f)?;
    // the last t axis is swept by eval_line; the others index line starts
    let last = t_grid.dims[d - 1];
    let head = if d > 1 {
        Some(Grid::new(t_grid.dims[..d - 1].to_vec())?)
    } else {
        None
    };
    let heads: Vec<Vec<f64>> = head.as_ref().map_or(vec![vec![]], |g| g.points());
    let weight = |ax: &crate::grid::Axis, k: usize| if k == 0 || k + 1 == ax.count { 0.5 } else { 1.0 };
    let head_w: Vec<f64> = match &head {
        None => vec![1.0],
        Some(g) => (0..g.len())
            .map(|k| {
                let idx = g.unravel(k);
                idx.iter().zip(&g.dims).map(|(&i, ax)| weight(ax, i) * ax.spacing).product()
            })
            .collect(),
    };
    let values = pts
        .par_iter()
        .map(|(x, a)| {
            let dir: Vec<f64> = (0..n).map(|i| a[(i, d - 1)]).collect();
            let mut acc = C64::new(0.0, 0.0);
            for (th, hw) in heads.iter().zip(&head_w) {
                let start: Vec<f64> = (0..n)
                    .map(|i| x[i] + th.iter().enumerate().map(|(j, t)| a[(i, j)] * t).sum::<f64>())
                    .collect();
                let line = spec.eval_line(&start, &dir, last.origin, last.spacing, last.count);
                let mut t = th.clone();
                t.push(0.0);
                let mut s = C64::new(0.0, 0.0);
                for (k, val) in line.iter().enumerate() {
                    t[d - 1] = last.node(k);
                    s += weight(&last, k) * h.time(&t).unwrap().conj() * val;
                }
                acc += hw * last.spacing * s;
            }
            acc
        })
        .collect();
    Ok((values, truncated))
}

/// Direct quadrature over rigid motions.
pub fn radon_forward(
    f: &SampledSignal,
    h: &Window,
    pts: &[(Vec<f64>, RigidMotion)],
    t_grid: &Grid,
) -> Result<RadonField> {
    let (n, d) = (f.ndim(), t_grid.ndim());
    let raw = pts
        .iter()
        .map(|(x, m)| Ok((x.clone(), motion_matrix(m, d, n)?)))
        .collect::<Result<Vec<_>>>()?;
    let (values, truncated) = radon_forward_matrix(f, h, &raw, t_grid)?;
    Ok(RadonField {
        d,
        entries: pts
            .iter()
            .zip(values)
            .map(|((x, m), value)| RadonEntry {
                x: x.clone(),
                motion: m.clone(),
                value,
            })
            .collect(),
        truncated,
    })
}

/// `A′p`, component `j` being `v (R e_j)·p`.
fn transpose_apply(a: &DMatrix<f64>, p: &[f64]) -> Vec<f64> {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| a[(i, j)] * p[i]).sum())
        .collect()
}

fn spectral_slice(spec: &SpectralSignal, h: &Window, a: &DMatrix<f64>) -> Result<SampledSignal> {
    idft(&spec.map(|p, fh| h.hat(&transpose_apply(a, p)).conj() * fh))
}

/// `f_h(·, A) = idft(ĥ(A′p)* f̂(p))` on the whole grid.
pub fn radon_forward_spectral(f: &SampledSignal, h: &Window, m: &RigidMotion, d: usize) -> Result<SampledSignal> {
    if h.dim != d {
        return invalid(format!("window `{}` is {}-d, expected {d}-d", h.label, h.dim));
    }
    let a = motion_matrix(m, d, f.ndim())?;
    spectral_slice(&dft(f)?, h, &a)
}

/// Slices over the product design `speeds × rotations`, rotation-major.
#[derive(Debug, Clone)]
pub struct RadonSweep {
    pub d: usize,
    pub rule: RotationQuadrature,
    pub speeds: LogAxis,
    pub slices: Vec<SampledSignal>,
}

impl RadonSweep {
    pub fn motions(&self) -> Vec<(DMatrix<f64>, f64)> {
        motions(&self.rule, &self.speeds, self.d)
    }
}

fn motions(rule: &RotationQuadrature, speeds: &LogAxis, d: usize) -> Vec<(DMatrix<f64>, f64)> {
    let sw = speeds.log_weights();
    let mut out = Vec::with_capacity(rule.len() * speeds.count);
    for (r, wr) in rule.nodes.iter().zip(&rule.weights) {
        for (v, wv) in speeds.nodes().into_iter().zip(&sw) {
            out.push((r.columns(0, d) * v, wr * wv));
        }
    }
    out
}

pub fn radon_sweep(
    f: &SampledSignal,
    h: &Window,
    d: usize,
    rule: &RotationQuadrature,
    speeds: &LogAxis,
) -> Result<RadonSweep> {
    if rule.n != f.ndim() {
        return invalid(format!("rotation rule is for SO({}), signal is {}-d", rule.n, f.ndim()));
    }
    if h.dim != d || d > rule.n {
        return invalid(format!("window `{}` is {}-d, expected {d}-d with d ≤ n", h.label, h.dim));
    }
    let spec = dft(f)?;
    let slices = motions(rule, speeds, d)
        .par_iter()
        .map(|(a, _)| spectral_slice(&spec, h, a))
        .collect::<Result<Vec<_>>>()?;
    Ok(RadonSweep {
        d,
        rule: rule.clone(),
        speeds: *speeds,
        slices,
    })
}

fn rigid_normalization(h: &Window, n: usize, d: usize, rule: &RotationQuadrature) -> Result<f64> {
    let adm = rigid_admissibility(h, n, d, rule)?;
    adm.normalization().ok_or_else(|| Error::Inadmissible {
        label: h.label.clone(),
        reason: match adm.inverse_n {
            Constant::Infinite => "rigid-motion constant N⁻¹ = ∞".into(),
            Constant::Finite(c) => format!("rigid-motion constant N⁻¹ = {c:.6e}"),
        },
    })
}

/// `f(x′) = ∫dx ∫ dρ(A) h_{x,A}(x′) f_h(x, A)` with `dρ = N v⁻¹dv dR`.
pub fn radon_reconstruct(sweep: &RadonSweep, h: &Window, reference: Option<&SampledSignal>) -> Result<Reconstruction> {
    if sweep.slices.is_empty() {
        return invalid("empty sweep");
    }
    let norm = rigid_normalization(h, sweep.rule.n, sweep.d, &sweep.rule)?;
    let ms = sweep.motions();
    let weights: Vec<f64> = ms.iter().map(|(_, w)| norm * w).collect();
    let signal = synthesize(&sweep.slices, &weights, |k, p| h.hat(&transpose_apply(&ms[k].0, p)))?;
    let rel_error = reference.map(|r| signal.rel_l2_error(r));
    Ok(Reconstruction { signal, rel_error })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadonResolution {
    pub normalization: f64,
    pub max_deviation: f64,
    pub values: Vec<f64>,
    pub haar_error: f64,
}

/// Discretized `H(p) = ∫ dρ(A) |ĥ(A′p)|²` on the product design.
pub fn radon_resolution(
    h: &Window,
    d: usize,
    rule: &RotationQuadrature,
    speeds: &LogAxis,
    p_samples: &[Vec<f64>],
) -> Result<RadonResolution> {
    let norm = rigid_normalization(h, rule.n, d, rule)?;
    let ms = motions(rule, speeds, d);
    let values: Vec<f64> = p_samples
        .iter()
        .map(|p| norm * ms.iter().map(|(a, w)| w * h.hat(&transpose_apply(a, p)).norm_sqr()).sum::<f64>())
        .collect();
    Ok(RadonResolution {
        normalization: norm,
        max_deviation: values.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max),
        values,
        haar_error: haar_error(rule),
    })
}

/// Speeds resolving `|ĥ|²` for `p_lo ≤ |p| ≤ p_hi`, as for the X-ray design.
pub fn speeds_for_band(h: &Window, band: (f64, f64), count: usize) -> Result<LogAxis> {
    let one_d = if h.dim == 1 {
        h.clone()
    } else {
        // radial profile along the diagonal
        let hh = h.clone();
        let dim = h.dim;
        Window::new(
            "radial",
            1,
            h.decay_bound,
            std::sync::Arc::new(move |xi: &[f64]| hh.hat(&vec![xi[0] / (dim as f64).sqrt(); dim])),
        )
    };
    let (lo, hi) = crate::xray::spectral_support(&one_d);
    LogAxis::new(count, lo / band.1, hi / (band.0 * 1e-3))
}
