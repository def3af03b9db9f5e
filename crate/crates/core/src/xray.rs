//! The windowed X-ray transform `f_h(x, v) = ∫ h(t)* f(x + vt) dt`, its
//! wavelets and the reconstruction over a polar velocity design.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::grid::{Grid, LogAxis};
use crate::quad::gauss_legendre;
use crate::spectral::{dft, idft, SampledSignal, SpectralSignal};
use crate::window::{normalization_constant, Window};

/// Nodes per reduction chunk; chunk sums are combined in index order so the
/// result does not depend on the thread count.
pub(crate) const CHUNK: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct XRayPoint {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
}

/// Values of `f_h` at scattered `(x, v)` points.
#[derive(Debug, Clone, PartialEq)]
pub struct XRayField {
    pub points: Vec<XRayPoint>,
    pub values: Vec<C64>,
    /// The `t` grid did not cover the window's support.
    pub truncated: bool,
}

/// One velocity node with its weight for `|v|^{-n} dv = d(ln r) dΩ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VNode {
    pub v: Vec<f64>,
    pub weight: f64,
}

/// Polar velocity design: geometric radii times a direction rule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VDesign {
    pub n: usize,
    pub radii: LogAxis,
    pub angles: usize,
    /// Offset of the first angle in units of the angular step.
    pub angle_offset: f64,
    pub nodes: Vec<VNode>,
}

pub const DEFAULT_RADII: usize = 48;
pub const DEFAULT_ANGLES: usize = 32;
/// Smallest `|cos|` between `p` and a direction that the radial range still resolves.
const MIN_COSINE: f64 = 1e-3;

/// Directions and their surface weights on `S^{n-1}`.
pub fn sphere_rule(n: usize, angles: usize, offset: f64) -> Result<Vec<(Vec<f64>, f64)>> {
    match n {
        1 => Ok(vec![(vec![1.0], 1.0), (vec![-1.0], 1.0)]),
        2 => {
            if angles < 2 {
                return invalid("need at least 2 angles");
            }
            Ok((0..angles)
                .map(|k| {
                    let a = 2.0 * PI * (k as f64 + offset) / angles as f64;
                    (vec![a.cos(), a.sin()], 2.0 * PI / angles as f64)
                })
                .collect())
        }
        3 => {
            if angles < 4 {
                return invalid("need at least 4 angles in 3-d");
            }
            let (x, w) = gauss_legendre(angles / 2);
            let mut out = Vec::with_capacity(angles * angles / 2);
            for (c, wc) in x.iter().zip(&w) {
                let s = (1.0 - c * c).sqrt();
                for k in 0..angles {
                    let a = 2.0 * PI * (k as f64 + offset) / angles as f64;
                    out.push((vec![s * a.cos(), s * a.sin(), *c], wc * 2.0 * PI / angles as f64));
                }
            }
            Ok(out)
        }
        _ => Err(Error::Invalid(format!("polar designs support n ≤ 3, got {n}"))),
    }
}

impl VDesign {
    pub fn polar(n: usize, radii: LogAxis, angles: usize, angle_offset: f64) -> Result<Self> {
        let dirs = sphere_rule(n, angles, angle_offset)?;
        let rw = radii.log_weights();
        let mut nodes = Vec::with_capacity(dirs.len() * radii.count);
        for (dir, wd) in &dirs {
            for (r, wr) in radii.nodes().into_iter().zip(&rw) {
                nodes.push(VNode {
                    v: dir.iter().map(|c| c * r).collect(),
                    weight: wd * wr,
                });
            }
        }
        Ok(VDesign {
            n,
            radii,
            angles,
            angle_offset,
            nodes,
        })
    }

    /// Radii chosen so that `|ĥ(p·v)|²` is resolved for `p_lo ≤ |p| ≤ p_hi`
    /// and for directions down to a cosine of `1e-3` with `p`.
    pub fn for_band(h: &Window, n: usize, band: (f64, f64), radii: usize, angles: usize) -> Result<Self> {
        let (p_lo, p_hi) = band;
        if !(p_lo > 0.0 && p_hi >= p_lo) {
            return invalid(format!("band [{p_lo}, {p_hi}] must satisfy 0 < lo ≤ hi"));
        }
        let (xi_lo, xi_hi) = spectral_support(h);
        let r_min = xi_lo / p_hi;
        let r_max = xi_hi / (p_lo * MIN_COSINE);
        VDesign::polar(n, LogAxis::new(radii, r_min, r_max)?, angles, 0.5)
    }

    /// The design used when none is given: 48 radii, 32 angles.
    pub fn default_for(h: &Window, n: usize, band: (f64, f64)) -> Result<Self> {
        VDesign::for_band(h, n, band, DEFAULT_RADII, DEFAULT_ANGLES)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `(ξ_lo, ξ_hi)` holding all but `1e-7` (below) and `1e-12` (above) of
/// `∫ |ĥ|² dξ/|ξ|`.
pub fn spectral_support(h: &Window) -> (f64, f64) {
    let m = 4000;
    let (a, b) = ((1e-9f64).ln(), h.decay_bound.ln());
    let du = (b - a) / m as f64;
    let g = |u: f64| {
        let r = u.exp();
        h.hat1(r).norm_sqr() + h.hat1(-r).norm_sqr()
    };
    let mut cum = vec![0.0; m + 1];
    for k in 1..=m {
        let u0 = a + (k - 1) as f64 * du;
        cum[k] = cum[k - 1] + 0.5 * du * (g(u0) + g(u0 + du));
    }
    let total = cum[m];
    if total <= 0.0 {
        return (1e-3, h.decay_bound);
    }
    let lo = cum.iter().position(|&c| c > 1e-7 * total).unwrap_or(0);
    let hi = cum.iter().position(|&c| c >= (1.0 - 1e-12) * total).unwrap_or(m);
    ((a + lo.saturating_sub(1) as f64 * du).exp(), (a + hi as f64 * du).exp())
}

fn check_v(v: &[f64], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::Invalid(format!("velocity has {} components, signal is {n}-d", v.len())));
    }
    if v.iter().map(|c| c * c).sum::<f64>().sqrt() <= 1e-14 {
        return invalid("velocity v = 0 is outside the transform's domain");
    }
    Ok(())
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Direct quadrature of `∫ h(t)* f(x + vt) dt` with trigonometric
/// interpolation of `f` between grid nodes.
pub fn xray_forward_direct(f: &SampledSignal, h: &Window, pts: &[XRayPoint], t_grid: &Grid) -> Result<XRayField> {
    if t_grid.ndim() != 1 {
        return invalid("t grid must be one-dimensional");
    }
    if h.dim != 1 || !h.has_time() {
        return Err(Error::Invalid(format!("window `{}` needs a 1-d time form", h.label)));
    }
    let n = f.ndim();
    for p in pts {
        check_v(&p.v, n)?;
        if p.x.len() != n {
            return invalid("point dimension does not match the signal");
        }
    }
    let ta = t_grid.dims[0];
    let half = ta.origin.abs().min(ta.last().abs());
    let truncated = h.time_tail(half).map_or(true, |r| r > 1e-10);
    let spec = dft(f)?;
    let hconj: Vec<C64> = ta.nodes().iter().map(|&t| h.time(&[t]).unwrap().conj()).collect();
    let values = pts
        .par_iter()
        .map(|p| {
            let line = spec.eval_line(&p.x, &p.v, ta.origin, ta.spacing, ta.count);
            let k = line.len() - 1;
            let mut acc: C64 = line.iter().zip(&hconj).map(|(a, b)| a * b).sum();
            acc -= 0.5 * (line[0] * hconj[0] + line[k] * hconj[k]);
            acc * ta.spacing
        })
        .collect();
    Ok(XRayField {
        points: pts.to_vec(),
        values,
        truncated,
    })
}

fn spectral_slice(spec: &SpectralSignal, h: &Window, v: &[f64]) -> Result<SampledSignal> {
    let out = spec.map(|p, fh| h.hat1(dot(p, v)).conj() * fh);
    idft(&out)
}

/// `f_h(·, v)` on the whole grid: `idft(ĥ(p·v)* f̂(p))`.
pub fn xray_forward_spectral(f: &SampledSignal, h: &Window, v: &[f64]) -> Result<SampledSignal> {
    check_v(v, f.ndim())?;
    spectral_slice(&dft(f)?, h, v)
}

/// Samples of the wavelet `h_{x,v}(x′) = idft(e^{-2πip·x} ĥ(p·v))`.
pub fn wavelet_xray(h: &Window, x: &[f64], v: &[f64], grid: &Grid) -> Result<SampledSignal> {
    check_v(v, grid.ndim())?;
    let spec = SpectralSignal::from_fn(grid.clone(), |p| {
        h.hat1(dot(p, v)) * C64::from_polar(1.0, -2.0 * PI * dot(p, x))
    })?;
    idft(&spec)
}

/// `f_h` sampled on the full x-grid for every node of a velocity design.
#[derive(Debug, Clone)]
pub struct XRayGridField {
    pub design: VDesign,
    pub slices: Vec<SampledSignal>,
}

impl XRayGridField {
    pub fn grid(&self) -> &Grid {
        &self.slices[0].grid
    }

    pub fn linear_combination(&self, a: C64, other: &XRayGridField, b: C64) -> Result<XRayGridField> {
        let slices = self
            .slices
            .iter()
            .zip(&other.slices)
            .map(|(s, o)| s.scale(a).add(&o.scale(b)))
            .collect::<Result<Vec<_>>>()?;
        Ok(XRayGridField {
            design: self.design.clone(),
            slices,
        })
    }
}

/// Forward transform over a design.
pub fn xray_sweep(f: &SampledSignal, h: &Window, design: &VDesign) -> Result<XRayGridField> {
    if design.n != f.ndim() {
        return invalid(format!("design is {}-d, signal is {}-d", design.n, f.ndim()));
    }
    let spec = dft(f)?;
    let slices = design
        .nodes
        .par_iter()
        .map(|node| spectral_slice(&spec, h, &node.v))
        .collect::<Result<Vec<_>>>()?;
    Ok(XRayGridField {
        design: design.clone(),
        slices,
    })
}

/// A reconstruction with its error against an optional reference.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub signal: SampledSignal,
    pub rel_error: Option<f64>,
}

/// Weighted spectral synthesis `Σ_k w_k idft(ĝ_k(p) dft(F_k))`, reduced in
/// fixed-size chunks.
pub(crate) fn synthesize<M>(slices: &[SampledSignal], weights: &[f64], multiplier: M) -> Result<SampledSignal>
where
    M: Fn(usize, &[f64]) -> C64 + Sync,
{
    let grid = slices[0].grid.clone();
    let freq = grid.dual();
    let points = freq.points();
    let chunks: Vec<Vec<C64>> = slices
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(c, chunk)| -> Result<Vec<C64>> {
            let mut acc = vec![C64::new(0.0, 0.0); grid.len()];
            for (j, s) in chunk.iter().enumerate() {
                let k = c * CHUNK + j;
                let spec = dft(s)?;
                for (i, (a, v)) in acc.iter_mut().zip(&spec.values).enumerate() {
                    *a += weights[k] * multiplier(k, &points[i]) * v;
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = vec![C64::new(0.0, 0.0); grid.len()];
    for c in chunks {
        for (t, v) in total.iter_mut().zip(c) {
            *t += v;
        }
    }
    idft(&SpectralSignal::new(grid, total)?)
}

/// `f(x′) = N ∫∫ |v|^{-n} dx dv h_{x,v}(x′) f_h(x, v)`, evaluated spectrally.
pub fn xray_reconstruct(
    field: &XRayGridField,
    h: &Window,
    reference: Option<&SampledSignal>,
) -> Result<Reconstruction> {
    if field.slices.is_empty() {
        return invalid("empty field");
    }
    if field.design.nodes.iter().any(|n| dot(&n.v, &n.v) == 0.0) {
        return invalid("velocity design contains v = 0");
    }
    let norm = normalization_constant(h, field.design.n)?;
    let weights: Vec<f64> = field.design.nodes.iter().map(|n| norm * n.weight).collect();
    let nodes = &field.design.nodes;
    let signal = synthesize(&field.slices, &weights, |k, p| h.hat1(dot(p, &nodes[k].v)))?;
    let rel_error = reference.map(|r| signal.rel_l2_error(r));
    Ok(Reconstruction { signal, rel_error })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Plancherel {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_error: f64,
}

/// `∫ dμ |f_h|²` on the design against `‖f‖²`.
pub fn xray_plancherel(field: &XRayGridField, h: &Window, f: &SampledSignal) -> Result<Plancherel> {
    let norm = normalization_constant(h, field.design.n)?;
    let lhs: f64 = field
        .slices
        .iter()
        .zip(&field.design.nodes)
        .map(|(s, n)| norm * n.weight * s.norm_sq())
        .sum();
    let rhs = f.norm_sq();
    Ok(Plancherel {
        lhs,
        rhs,
        rel_error: (lhs - rhs).abs() / rhs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolutionCheck {
    pub max_deviation: f64,
    pub values: Vec<f64>,
}

/// Discretized `H(p) = N Σ_v w_v |ĥ(p·v)|²`.
pub fn resolution_function(h: &Window, norm: f64, p: &[f64], design: &VDesign) -> f64 {
    norm * design
        .nodes
        .iter()
        .map(|n| n.weight * h.hat1(dot(p, &n.v)).norm_sqr())
        .sum::<f64>()
}

/// Worst `|H(p) − 1|` over the given frequencies.
pub fn resolution_kernel_check(h: &Window, n: usize, p_samples: &[Vec<f64>], design: &VDesign) -> Result<ResolutionCheck> {
    if design.n != n {
        return invalid(format!("design is {}-d, expected {n}-d", design.n));
    }
    let norm = normalization_constant(h, n)?;
    let values: Vec<f64> = p_samples
        .iter()
        .map(|p| resolution_function(h, norm, p, design))
        .collect();
    let max_deviation = values.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    Ok(ResolutionCheck { max_deviation, values })
}

/// Frequencies `p` on rings `|p| ∈ [lo, hi]`, for H(p) checks.
pub fn ring_samples(n: usize, lo: f64, hi: f64, rings: usize, per_ring: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for i in 0..rings {
        let r = if rings == 1 { lo } else { lo * (hi / lo).powf(i as f64 / (rings - 1) as f64) };
        for j in 0..per_ring {
            let a = 2.0 * PI * (j as f64 + 0.137) / per_ring as f64;
            let p = match n {
                1 => vec![if j % 2 == 0 { r } else { -r }],
                2 => vec![r * a.cos(), r * a.sin()],
                _ => {
                    let c = 1.0 - 2.0 * (j as f64 + 0.5) / per_ring as f64;
                    let s = (1.0 - c * c).sqrt();
                    let mut v = vec![r * s * (3.7 * a).cos(), r * s * (3.7 * a).sin(), r * c];
                    v.resize(n, 0.0);
                    v
                }
            };
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Axis;
    use crate::synth::bandlimited;
    use crate::window::builtin_window;
    use rand::SeedableRng;

    fn grid2(n: usize, half: f64) -> Grid {
        Grid::cube(Axis::periodic(-half, half, n).unwrap(), 2).unwrap()
    }

    fn gaussian2(grid: Grid) -> SampledSignal {
        SampledSignal::from_fn(grid, |x| C64::new((-PI * (x[0] * x[0] + x[1] * x[1])).exp(), 0.0)).unwrap()
    }

    fn t_grid() -> Grid {
        Grid::from_axis(Axis::new(1601, 0.005, -4.0).unwrap())
    }

    #[test]
    fn direct_matches_dense_oracle() {
        let f = gaussian2(grid2(64, 4.0));
        let h = builtin_window("gauss-deriv-1").unwrap();
        let pts = vec![
            XRayPoint { x: vec![0.0, 0.0], v: vec![1.0, 0.0] },
            XRayPoint { x: vec![0.3, 0.2], v: vec![1.0, 0.0] },
            XRayPoint { x: vec![-0.25, 0.4], v: vec![0.6, -0.9] },
        ];
        let field = xray_forward_direct(&f, &h, &pts, &t_grid()).unwrap();
        assert!(!field.truncated);
        for (p, got) in pts.iter().zip(&field.values) {
            // 1e-4 spacing quadrature of the closed-form integrand
            let dt = 1e-4;
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..=80_000 {
                let t = -4.0 + k as f64 * dt;
                let y0 = p.x[0] + p.v[0] * t;
                let y1 = p.x[1] + p.v[1] * t;
                let w = if k == 0 || k == 80_000 { 0.5 } else { 1.0 };
                acc += w * C64::new(0.0, t * (-PI * t * t).exp()).conj() * (-PI * (y0 * y0 + y1 * y1)).exp();
            }
            acc *= dt;
            assert!((got - acc).norm() < 1e-6, "{got} vs {acc}");
        }
    }

    #[test]
    fn zero_signal_and_zero_velocity() {
        let f = SampledSignal::zeros(grid2(16, 2.0));
        let h = builtin_window("gauss-deriv-1").unwrap();
        let pts = vec![XRayPoint { x: vec![0.1, 0.0], v: vec![0.0, 1.0] }];
        let r = xray_forward_direct(&f, &h, &pts, &t_grid()).unwrap();
        assert_eq!(r.values[0], C64::new(0.0, 0.0));
        assert!(xray_forward_spectral(&f, &h, &[0.0, 1.0]).unwrap().max_abs() == 0.0);
        let bad = vec![XRayPoint { x: vec![0.0, 0.0], v: vec![0.0, 0.0] }];
        assert!(xray_forward_direct(&f, &h, &bad, &t_grid()).is_err());
        assert!(xray_forward_spectral(&f, &h, &[0.0, 0.0]).is_err());
        assert!(wavelet_xray(&h, &[0.0, 0.0], &[0.0, 0.0], &f.grid).is_err());
    }

    #[test]
    fn short_t_grid_is_flagged() {
        let f = gaussian2(grid2(32, 4.0));
        let h = builtin_window("gauss-deriv-1").unwrap();
        let pts = vec![XRayPoint { x: vec![0.0, 0.0], v: vec![1.0, 0.0] }];
        let short = Grid::from_axis(Axis::new(41, 0.025, -0.5).unwrap());
        assert!(xray_forward_direct(&f, &h, &pts, &short).unwrap().truncated);
        let ast = builtin_window("ast").unwrap();
        assert!(xray_forward_direct(&f, &ast, &pts, &t_grid()).unwrap().truncated);
    }

    #[test]
    fn direct_and_spectral_paths_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let grid = grid2(48, 4.0);
        let f = bandlimited(&grid, 0.3, 2.0, &mut rng).unwrap();
        let h = builtin_window("gauss-deriv-1").unwrap();
        let v = vec![0.8, -0.45];
        let slice = xray_forward_spectral(&f, &h, &v).unwrap();
        let idx = [0usize, 100, 777, 1500, 2303];
        let pts: Vec<XRayPoint> = idx.iter().map(|&k| XRayPoint { x: grid.point(k), v: v.clone() }).collect();
        let long = Grid::from_axis(Axis::new(2401, 0.005, -6.0).unwrap());
        let direct = xray_forward_direct(&f, &h, &pts, &long).unwrap();
        for (k, d) in idx.iter().zip(&direct.values) {
            assert!((slice.values[*k] - d).norm() < 1e-6);
        }
    }

    #[test]
    fn small_velocity_limit() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let f = bandlimited(&grid2(32, 4.0), 0.3, 1.5, &mut rng).unwrap();
        let h = builtin_window("gauss-deriv-1").unwrap();
        let s = xray_forward_spectral(&f, &h, &[1e-3, 0.0]).unwrap();
        assert!(s.max_abs() < 1e-3 * f.max_abs());
    }

    #[test]
    fn wavelet_pairing() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let grid = grid2(40, 4.0);
        let f = bandlimited(&grid, 0.3, 2.0, &mut rng).unwrap();
        let h = builtin_window("morlet-like").unwrap();
        let v = vec![0.3, 0.5];
        let slice = xray_forward_spectral(&f, &h, &v).unwrap();
        for k in [5usize, 333, 1200] {
            let x = grid.point(k);
            let w = wavelet_xray(&h, &x, &v, &grid).unwrap();
            assert!((w.inner(&f) - slice.values[k]).norm() < 1e-8);
        }
    }

    #[test]
    fn translation_covariance_on_grid() {
        let grid = grid2(32, 4.0);
        let h = builtin_window("gauss-deriv-1").unwrap();
        let v = vec![0.7, 0.2];
        let x = vec![0.1, -0.3];
        let (bx, by) = (3usize, 5usize);
        let b = vec![bx as f64 * 0.25, by as f64 * 0.25];
        let w0 = wavelet_xray(&h, &x, &v, &grid).unwrap();
        let w1 = wavelet_xray(&h, &[x[0] + b[0], x[1] + b[1]], &v, &grid).unwrap();
        for i in 0..32 {
            for j in 0..32 {
                let src = ((i + 32 - bx) % 32) * 32 + (j + 32 - by) % 32;
                assert!((w1.values[i * 32 + j] - w0.values[src]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rotation_covariance() {
        // odd count so the grid and its dual are symmetric under a quarter turn
        let n = 33;
        let grid = Grid::cube(Axis::symmetric(n, 0.25).unwrap(), 2).unwrap();
        let h = builtin_window("gauss-deriv-1").unwrap();
        let (x, v) = (vec![0.4, -0.2], vec![0.9, 0.35]);
        let w = wavelet_xray(&h, &x, &v, &grid).unwrap();
        // A = rotation by +90°: (a, b) → (−b, a); (U h)(y) = h(A⁻¹y), A⁻¹(a, b) = (b, −a)
        let rot = |p: &[f64]| vec![-p[1], p[0]];
        let w_rot = wavelet_xray(&h, &rot(&x), &rot(&v), &grid).unwrap();
        for i in 0..n {
            for j in 0..n {
                // node (i, j) sits at (a, b); A⁻¹(a, b) = (b, −a) is node (j, n−1−i)
                let src = j * n + (n - 1 - i);
                assert!((w.values[src] - w_rot.values[i * n + j]).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn h_is_rotation_invariant_on_design_symmetries() {
        let h = builtin_window("gauss-deriv-1").unwrap();
        let d = VDesign::default_for(&h, 2, (0.5, 4.0)).unwrap();
        let norm = normalization_constant(&h, 2).unwrap();
        let p = vec![1.3, 0.4];
        let h0 = resolution_function(&h, norm, &p, &d);
        for m in [1, 5, 13] {
            let a = 2.0 * PI * m as f64 / d.angles as f64;
            let q = vec![a.cos() * p[0] - a.sin() * p[1], a.sin() * p[0] + a.cos() * p[1]];
            assert!((resolution_function(&h, norm, &q, &d) - h0).abs() < 1e-10);
        }
        // reflection across the first axis maps the half-offset angles to themselves
        let q = vec![p[0], -p[1]];
        assert!((resolution_function(&h, norm, &q, &d) - h0).abs() < 1e-10);
    }

    #[test]
    fn resolution_function_near_one() {
        let h = builtin_window("gauss-deriv-1").unwrap();
        let d = VDesign::default_for(&h, 2, (0.5, 4.0)).unwrap();
        let r = resolution_kernel_check(&h, 2, &ring_samples(2, 0.5, 4.0, 12, 40), &d).unwrap();
        assert!(r.max_deviation < 1e-2, "{}", r.max_deviation);
        let ast = builtin_window("ast").unwrap();
        assert!(matches!(
            resolution_kernel_check(&ast, 2, &[vec![1.0, 0.0]], &d),
            Err(Error::Inadmissible { .. })
        ));
    }

    #[test]
    fn one_dimensional_design() {
        let h = builtin_window("gauss-d2").unwrap();
        let d = VDesign::default_for(&h, 1, (0.25, 4.0)).unwrap();
        let r = resolution_kernel_check(&h, 1, &ring_samples(1, 0.25, 4.0, 20, 2), &d).unwrap();
        assert!(r.max_deviation < 1e-4, "{}", r.max_deviation);
    }

    #[test]
    fn reconstruction_is_linear_and_zero_preserving() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let grid = grid2(16, 2.0);
        let h = builtin_window("gauss-deriv-1").unwrap();
        let d = VDesign::for_band(&h, 2, (0.5, 3.5), 12, 8).unwrap();
        let f = bandlimited(&grid, 0.5, 3.5, &mut rng).unwrap();
        let g = bandlimited(&grid, 0.5, 3.5, &mut rng).unwrap();
        let (ff, fg) = (xray_sweep(&f, &h, &d).unwrap(), xray_sweep(&g, &h, &d).unwrap());
        let (a, b) = (C64::new(0.3, -1.2), C64::new(2.0, 0.5));
        let comb = xray_reconstruct(&ff.linear_combination(a, &fg, b).unwrap(), &h, None).unwrap();
        let rf = xray_reconstruct(&ff, &h, None).unwrap().signal;
        let rg = xray_reconstruct(&fg, &h, None).unwrap().signal;
        let sep = rf.scale(a).add(&rg.scale(b)).unwrap();
        assert!(comb.signal.rel_l2_error(&sep) < 1e-12);
        let z = SampledSignal::zeros(grid);
        let rz = xray_reconstruct(&xray_sweep(&z, &h, &d).unwrap(), &h, None).unwrap();
        assert_eq!(rz.signal.max_abs(), 0.0);
    }

    #[test]
    fn inadmissible_window_is_rejected() {
        let grid = grid2(16, 2.0);
        let h = builtin_window("ast").unwrap();
        let d = VDesign::for_band(&builtin_window("gauss-deriv-1").unwrap(), 2, (0.5, 3.5), 8, 8).unwrap();
        let s = xray_sweep(&SampledSignal::zeros(grid), &h, &d).unwrap();
        assert!(matches!(xray_reconstruct(&s, &h, None), Err(Error::Inadmissible { .. })));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(12))]

        #[test]
        fn dilation_property(seed in 0u64..500, ai in 0usize..4) {
            let a = [0.5, -0.5, 2.0, -2.0][ai];
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let f = bandlimited(&grid2(32, 4.0), 0.3, 1.5, &mut rng).unwrap();
            let h = builtin_window("gauss-deriv-1").unwrap();
            let ha = h.dilated(a);
            let v = vec![0.6, 0.3];
            let av: Vec<f64> = v.iter().map(|c| a * c).collect();
            let pts = vec![XRayPoint { x: vec![0.2, -0.1], v: av.clone() }];
            let pts_a = vec![XRayPoint { x: vec![0.2, -0.1], v: v.clone() }];
            let tg = Grid::from_axis(Axis::new(4001, 0.0025, -5.0).unwrap());
            let lhs = xray_forward_direct(&f, &h, &pts, &tg).unwrap().values[0];
            let rhs = xray_forward_direct(&f, &ha, &pts_a, &tg).unwrap().values[0];
            proptest::prop_assert!((lhs - rhs).norm() < 1e-8);
            let sl = xray_forward_spectral(&f, &h, &av).unwrap();
            let sr = xray_forward_spectral(&f, &ha, &v).unwrap();
            proptest::prop_assert!(sl.rel_l2_error(&sr) < 1e-12);
        }

        #[test]
        fn affine_covariance_of_pairing(seed in 0u64..500, alpha in 0.5f64..2.0) {
            // ⟨U(A,0)h_{x,v}, f⟩ = |A|^{1/2}⟨h_{Ax,Av}, f⟩ for a dilation A = α I
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let grid = grid2(40, 5.0);
            let f = bandlimited(&grid, 0.2, 1.5, &mut rng).unwrap();
            let h = builtin_window("gauss-deriv-1").unwrap();
            let (x, v) = (vec![0.3, -0.2], vec![0.5, 0.4]);
            // (U(A,0)g)^(p) = |A|^{1/2} ĝ(Aᵀp) for A = αI
            let base = wavelet_xray(&h, &x, &v, &grid).unwrap();
            let bh = dft(&base).unwrap();
            let scaled = SpectralSignal::from_fn(grid.clone(), |p| {
                let q: Vec<f64> = p.iter().map(|c| alpha * c).collect();
                alpha * h.hat1(dot(&q, &v)) * C64::from_polar(1.0, -2.0 * PI * dot(&q, &x))
            }).unwrap();
            let _ = bh;
            let ua = idft(&scaled).unwrap();
            let ax: Vec<f64> = x.iter().map(|c| alpha * c).collect();
            let av: Vec<f64> = v.iter().map(|c| alpha * c).collect();
            let rhs = alpha * wavelet_xray(&h, &ax, &av, &grid).unwrap().inner(&f);
            proptest::prop_assert!((ua.inner(&f) - rhs).norm() < 1e-8);
        }
    }
}
