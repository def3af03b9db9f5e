//! Analysing windows `h`, their spectra `ĥ`, and admissibility constants.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Serialize, Serializer};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::quad::radial_log_integral;
use crate::radon::RotationQuadrature;
use crate::spectral::{dft, SampledSignal, SpectralSignal};

/// A function of a real vector: `ĥ(ξ)` or `h(t)`.
pub type VecFn = Arc<dyn Fn(&[f64]) -> C64 + Send + Sync>;

/// Step function with `θ(0) = ½`.
#[inline]
pub fn theta(u: f64) -> f64 {
    if u > 0.0 {
        1.0
    } else if u < 0.0 {
        0.0
    } else {
        0.5
    }
}

/// A window on `ℝᵈ` given by its spectrum and, when known, its time form.
#[derive(Clone)]
pub struct Window {
    pub label: String,
    pub dim: usize,
    /// Radius beyond which `|ĥ| < 1e-14`.
    pub decay_bound: f64,
    spectral: VecFn,
    time: Option<VecFn>,
}

impl fmt::Debug for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Window")
            .field("label", &self.label)
            .field("dim", &self.dim)
            .field("decay_bound", &self.decay_bound)
            .field("has_time_form", &self.time.is_some())
            .finish()
    }
}

impl Window {
    pub fn new(label: impl Into<String>, dim: usize, decay_bound: f64, spectral: VecFn) -> Self {
        Window {
            label: label.into(),
            dim,
            decay_bound,
            spectral,
            time: None,
        }
    }

    pub fn with_time(mut self, time: VecFn) -> Self {
        self.time = Some(time);
        self
    }

    #[inline]
    pub fn hat(&self, xi: &[f64]) -> C64 {
        (self.spectral)(xi)
    }

    #[inline]
    pub fn hat1(&self, xi: f64) -> C64 {
        (self.spectral)(&[xi])
    }

    pub fn has_time(&self) -> bool {
        self.time.is_some()
    }

    pub fn time(&self, t: &[f64]) -> Option<C64> {
        self.time.as_ref().map(|h| h(t))
    }

    /// `h_a(t) = |a|^{-d} h(t/a)`, so `ĥ_a(ξ) = ĥ(aξ)`.
    pub fn dilated(&self, a: f64) -> Window {
        let spec = self.spectral.clone();
        let d = self.dim as i32;
        let mut w = Window::new(
            format!("{}@{a}", self.label),
            self.dim,
            self.decay_bound / a.abs(),
            Arc::new(move |xi: &[f64]| {
                let s: Vec<f64> = xi.iter().map(|x| a * x).collect();
                spec(&s)
            }),
        );
        if let Some(t) = self.time.clone() {
            w.time = Some(Arc::new(move |tt: &[f64]| {
                let s: Vec<f64> = tt.iter().map(|x| x / a).collect();
                t(&s) / a.abs().powi(d)
            }));
        }
        w
    }

    /// `c · h`.
    pub fn scaled(&self, c: f64) -> Window {
        let spec = self.spectral.clone();
        let mut w = Window::new(
            format!("{c}*{}", self.label),
            self.dim,
            self.decay_bound,
            Arc::new(move |xi: &[f64]| spec(xi) * c),
        );
        if let Some(t) = self.time.clone() {
            w.time = Some(Arc::new(move |tt: &[f64]| t(tt) * c));
        }
        w
    }

    /// `h(t − a)`, so `ĥ` picks up the phase `e^{-2πi ξ·a}`.
    pub fn translated(&self, a: Vec<f64>) -> Window {
        let spec = self.spectral.clone();
        let a2 = a.clone();
        let mut w = Window::new(
            format!("{}+shift", self.label),
            self.dim,
            self.decay_bound,
            Arc::new(move |xi: &[f64]| {
                let ph: f64 = xi.iter().zip(&a2).map(|(x, y)| x * y).sum();
                spec(xi) * C64::from_polar(1.0, -2.0 * PI * ph)
            }),
        );
        if let Some(t) = self.time.clone() {
            w.time = Some(Arc::new(move |tt: &[f64]| {
                let s: Vec<f64> = tt.iter().zip(&a).map(|(x, y)| x - y).collect();
                t(&s)
            }));
        }
        w
    }

    /// Window from time samples. The spectrum is the exact transform of the
    /// trigonometric interpolant; the time form is that interpolant.
    pub fn from_samples(label: impl Into<String>, h: &SampledSignal) -> Result<Window> {
        let spec = Arc::new(dft(h)?);
        let samples = Arc::new(h.clone());
        let dim = h.ndim();
        let s2 = samples.clone();
        let spectral: VecFn = Arc::new(move |xi: &[f64]| {
            let g = &s2.grid;
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..g.len() {
                let t = g.point(k);
                let ph: f64 = t.iter().zip(xi).map(|(a, b)| a * b).sum();
                acc += s2.values[k] * C64::from_polar(1.0, -2.0 * PI * ph);
            }
            acc * g.cell()
        });
        let decay_bound = spec
            .grid
            .dims
            .iter()
            .map(|a| a.origin.abs().max(a.last().abs()))
            .fold(0.0, f64::max)
            * (dim as f64).sqrt();
        let time: VecFn = Arc::new(move |t: &[f64]| spec.eval(t));
        Ok(Window::new(label, dim, decay_bound, spectral).with_time(time))
    }

    /// Largest `|h(t)|` on the boundary of the cube `[-L, L]ᵈ`, relative to
    /// `|h|` at the origin-centred samples; used to flag short `t` grids.
    pub(crate) fn time_tail(&self, half_width: f64) -> Option<f64> {
        let t = self.time.as_ref()?;
        let mut peak = 0.0f64;
        let mut edge = 0.0f64;
        for k in 0..=64 {
            let s = -half_width + 2.0 * half_width * k as f64 / 64.0;
            let mut pt = vec![0.0; self.dim];
            pt[0] = s;
            peak = peak.max(t(&pt).norm());
        }
        let mut pt = vec![0.0; self.dim];
        for a in 0..self.dim {
            for sign in [-1.0, 1.0] {
                pt.iter_mut().for_each(|v| *v = 0.0);
                pt[a] = sign * half_width;
                edge = edge.max(t(&pt).norm());
            }
        }
        Some(if peak > 0.0 { edge / peak } else { 0.0 })
    }
}

/// The names accepted by [`builtin_window`].
pub const BUILTIN_WINDOWS: [&str; 4] = ["ast", "gauss-deriv-1", "morlet-like", "gauss-d2"];

const MORLET_CENTER: f64 = 2.0;

/// Built-in one-dimensional windows.
///
/// * `ast`: `ĥ(ξ) = θ(ξ)e^{-2πξ}`, `h(τ) = i/(2π(τ + i))`
/// * `gauss-deriv-1`: `ĥ(ξ) = ξe^{-πξ²}`, `h(t) = i t e^{-πt²}`
/// * `gauss-d2`: `ĥ(ξ) = ξ²e^{-πξ²}`, `h(t) = (1/(2π) − t²)e^{-πt²}`
/// * `morlet-like`: `ĥ(ξ) = e^{-π(ξ−2)²} − e^{-4π}e^{-πξ²}`
pub fn builtin_window(name: &str) -> Result<Window> {
    let w = match name {
        "ast" => Window::new(
            "ast",
            1,
            5.5,
            Arc::new(|xi: &[f64]| {
                let m = theta(xi[0]);
                C64::new(if m == 0.0 { 0.0 } else { m * (-2.0 * PI * xi[0]).exp() }, 0.0)
            }),
        )
        .with_time(Arc::new(|t: &[f64]| C64::i() / (2.0 * PI * C64::new(t[0], 1.0)))),
        "gauss-deriv-1" => Window::new(
            "gauss-deriv-1",
            1,
            4.0,
            Arc::new(|xi: &[f64]| C64::new(xi[0] * (-PI * xi[0] * xi[0]).exp(), 0.0)),
        )
        .with_time(Arc::new(|t: &[f64]| C64::new(0.0, t[0] * (-PI * t[0] * t[0]).exp()))),
        "gauss-d2" => Window::new(
            "gauss-d2",
            1,
            4.2,
            Arc::new(|xi: &[f64]| C64::new(xi[0] * xi[0] * (-PI * xi[0] * xi[0]).exp(), 0.0)),
        )
        .with_time(Arc::new(|t: &[f64]| {
            C64::new((0.5 / PI - t[0] * t[0]) * (-PI * t[0] * t[0]).exp(), 0.0)
        })),
        "morlet-like" => {
            let k = (-PI * MORLET_CENTER * MORLET_CENTER).exp();
            Window::new(
                "morlet-like",
                1,
                MORLET_CENTER + 3.5,
                Arc::new(move |xi: &[f64]| {
                    let x = xi[0];
                    C64::new((-PI * (x - MORLET_CENTER).powi(2)).exp() - k * (-PI * x * x).exp(), 0.0)
                }),
            )
            .with_time(Arc::new(move |t: &[f64]| {
                let g = (-PI * t[0] * t[0]).exp();
                C64::from_polar(g, 2.0 * PI * MORLET_CENTER * t[0]) - k * g
            }))
        }
        _ => {
            return Err(Error::Unknown {
                kind: "window",
                name: name.to_string(),
                options: BUILTIN_WINDOWS.join(", "),
            })
        }
    };
    Ok(w)
}

/// `ĥ(ξ) = Π_k ξ_k · e^{-π|ξ|²}` on `ℝᵈ`, with `h(t) = Π_k (i t_k) e^{-π|t|²}`.
pub fn gauss_deriv_product(d: usize) -> Window {
    Window::new(
        format!("gauss-deriv-product-{d}"),
        d,
        4.0 + 0.5 * d as f64,
        Arc::new(|xi: &[f64]| {
            let r2: f64 = xi.iter().map(|x| x * x).sum();
            C64::new(xi.iter().product::<f64>() * (-PI * r2).exp(), 0.0)
        }),
    )
    .with_time(Arc::new(|t: &[f64]| {
        let r2: f64 = t.iter().map(|x| x * x).sum();
        C64::i().powi(t.len() as i32) * t.iter().product::<f64>() * (-PI * r2).exp()
    }))
}

/// A constant that is either finite or `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Constant {
    Finite(f64),
    Infinite,
}

impl Constant {
    pub fn finite(&self) -> Option<f64> {
        match self {
            Constant::Finite(v) => Some(*v),
            Constant::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Constant::Infinite)
    }
}

/// `c_h` with its admissibility verdict and, when admissible, `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub label: String,
    pub c_h: Constant,
    pub admissible: bool,
    pub n: Option<usize>,
    pub normalization_n: Option<f64>,
}

impl AdmissibilityReport {
    /// Attaches `N = Γ(n/2)/(π^{n/2} c_h)` for dimension `n`.
    pub fn for_dimension(mut self, n: usize) -> Self {
        self.n = Some(n);
        self.normalization_n = match (self.admissible, self.c_h) {
            (true, Constant::Finite(c)) => Some(normalization_from(c, n)),
            _ => None,
        };
        self
    }
}

impl Serialize for AdmissibilityReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            window: &'a str,
            c_h: Option<f64>,
            c_h_infinite: bool,
            admissible: bool,
            n: Option<usize>,
            #[serde(rename = "normalization_N")]
            normalization_n: Option<f64>,
        }
        Out {
            window: &self.label,
            c_h: self.c_h.finite(),
            c_h_infinite: self.c_h.is_infinite(),
            admissible: self.admissible,
            n: self.n,
            normalization_n: self.normalization_n,
        }
        .serialize(s)
    }
}

fn normalization_from(c_h: f64, n: usize) -> f64 {
    let half = 0.5 * n as f64;
    gamma(half) / (PI.powf(half) * c_h)
}

/// `c_h = ∫ |ĥ(ξ)|² dξ/|ξ|` for a one-dimensional window.
pub fn admissibility_constant(h: &Window, tol: f64) -> Result<AdmissibilityReport> {
    if h.dim != 1 {
        return Err(Error::Invalid(format!(
            "admissibility_constant needs a 1-d window, `{}` is {}-d",
            h.label, h.dim
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Invalid(format!("tolerance {tol} is not positive")));
    }
    let pos = radial_log_integral(|r| h.hat1(r).norm_sqr(), h.decay_bound, tol);
    let neg = radial_log_integral(|r| h.hat1(-r).norm_sqr(), h.decay_bound, tol);
    let c_h = if pos.divergent || neg.divergent {
        Constant::Infinite
    } else {
        Constant::Finite(pos.value + neg.value)
    };
    let admissible = matches!(c_h, Constant::Finite(c) if c > 0.0);
    Ok(AdmissibilityReport {
        label: h.label.clone(),
        c_h,
        admissible,
        n: None,
        normalization_n: None,
    })
}

pub const DEFAULT_TOL: f64 = 1e-8;

/// `N = Γ(n/2)/(π^{n/2} c_h)`.
pub fn normalization_constant(h: &Window, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Invalid("dimension must be positive".into()));
    }
    let rep = admissibility_constant(h, DEFAULT_TOL)?;
    match rep.c_h {
        Constant::Finite(c) if c > 0.0 => Ok(normalization_from(c, n)),
        Constant::Finite(_) => Err(Error::Inadmissible {
            label: h.label.clone(),
            reason: "c_h = 0 (the window vanishes); reconstruction is undefined".into(),
        }),
        Constant::Infinite => Err(Error::Inadmissible {
            label: h.label.clone(),
            reason: "c_h = ∞ because ĥ(0) ≠ 0; reconstruction is undefined".into(),
        }),
    }
}

/// Rigid-motion admissibility `N⁻¹ = ∫₀^∞ v⁻¹dv ∫ dR |ĥ(v J′R₁′)|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidAdmissibility {
    pub inverse_n: Constant,
    pub admissible: bool,
}

impl RigidAdmissibility {
    pub fn normalization(&self) -> Option<f64> {
        match (self.admissible, self.inverse_n) {
            (true, Constant::Finite(c)) => Some(1.0 / c),
            _ => None,
        }
    }
}

/// Evaluates the rigid-motion admissibility integral.
///
/// For each rotation node the `v` integral depends only on the direction of
/// `w = J′R₁′` (the first `d` entries of the first row of `R`), since
/// substituting `r = v|w|` removes `|w|`. Nodes with `w = 0` lie on the
/// measure-zero set where that direction is undefined; they take the mean of
/// the radial integral over all directions, the same midpoint convention as
/// `θ(0) = ½`.
pub fn rigid_admissibility(
    h: &Window,
    n: usize,
    d: usize,
    rule: &RotationQuadrature,
) -> Result<RigidAdmissibility> {
    if d == 0 || d > n {
        return Err(Error::Invalid(format!("need 1 ≤ d ≤ n, got d = {d}, n = {n}")));
    }
    if h.dim != d {
        return Err(Error::Invalid(format!("window `{}` is {}-d, expected {d}-d", h.label, h.dim)));
    }
    if rule.n != n {
        return Err(Error::Invalid(format!("rotation rule is for SO({}), expected SO({n})", rule.n)));
    }
    let radial = |dir: &[f64]| {
        radial_log_integral(
            |r| {
                let xi: Vec<f64> = dir.iter().map(|c| r * c).collect();
                h.hat(&xi).norm_sqr()
            },
            h.decay_bound,
            DEFAULT_TOL,
        )
    };
    let fallback = || {
        let dirs = sphere_directions(d);
        let mut sum = 0.0;
        let mut div = false;
        for dir in &dirs {
            let r = radial(dir);
            div |= r.divergent;
            sum += r.value;
        }
        (sum / dirs.len() as f64, div)
    };
    let mut total = 0.0;
    let mut divergent = false;
    let mut cached_fallback = None;
    for (rot, w) in rule.nodes.iter().zip(&rule.weights) {
        let row: Vec<f64> = (0..d).map(|j| rot[(0, j)]).collect();
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        let (val, div) = if norm < 1e-12 {
            *cached_fallback.get_or_insert_with(fallback)
        } else {
            let dir: Vec<f64> = row.iter().map(|x| x / norm).collect();
            let r = radial(&dir);
            (r.value, r.divergent)
        };
        divergent |= div;
        total += w * val;
    }
    let inverse_n = if divergent {
        Constant::Infinite
    } else {
        Constant::Finite(total)
    };
    Ok(RigidAdmissibility {
        inverse_n,
        admissible: matches!(inverse_n, Constant::Finite(c) if c > 0.0),
    })
}

fn sphere_directions(d: usize) -> Vec<Vec<f64>> {
    match d {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..64)
            .map(|k| {
                let a = 2.0 * PI * (k as f64 + 0.5) / 64.0;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        _ => {
            // Fibonacci lattice on S^{d-1} restricted to the first three axes
            let m = 256;
            (0..m)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / m as f64;
                    let r = (1.0 - z * z).sqrt();
                    let phi = PI * (3.0 - 5f64.sqrt()) * k as f64;
                    let mut v = vec![0.0; d];
                    v[0] = r * phi.cos();
                    v[1] = r * phi.sin();
                    v[2] = z;
                    v
                })
                .collect()
        }
    }
}

/// Checks that the time and spectral forms agree on a reference grid.
pub fn time_spectral_consistency(h: &Window, grid: &crate::grid::Grid) -> Result<f64> {
    let t = h
        .time
        .as_ref()
        .ok_or_else(|| Error::Invalid(format!("window `{}` has no time form", h.label)))?;
    let samples = SampledSignal::from_fn(grid.clone(), |x| t(x))?;
    let spec = dft(&samples)?;
    let SpectralSignal { grid: pg, values, .. } = spec;
    let mut worst = 0.0f64;
    for (k, v) in values.iter().enumerate() {
        worst = worst.max((v - h.hat(&pg.point(k))).norm());
    }
    Ok(worst)
}
