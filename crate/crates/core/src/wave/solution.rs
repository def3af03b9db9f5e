use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::grid::{Axis, Grid};
use crate::window::theta;

/// A solution of the 1+1D wave equation, stored as its light-cone spectra
/// on a 1D frequency grid, together with the Sobolev degree `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveSolution {
    pub p_grid: Grid,
    pub plus: Vec<C64>,
    pub minus: Vec<C64>,
    pub s: u32,
}

/// Frequency axis `±(k + ½)Δp`, symmetric about and excluding zero.
pub fn default_p_axis(p_max: f64, dp: f64) -> Result<Axis> {
    if !(p_max > 0.0 && dp > 0.0) {
        return invalid("p_max and dp must be positive");
    }
    let half = (p_max / dp).round().max(1.0) as usize;
    Axis::symmetric(2 * half, dp)
}

pub(crate) fn is_zero_node(p: f64, dp: f64) -> bool {
    p.abs() <= 1e-9 * dp
}

impl WaveSolution {
    pub fn new(p_grid: Grid, plus: Vec<C64>, minus: Vec<C64>, s: u32) -> Result<Self> {
        let sol = WaveSolution { p_grid, plus, minus, s };
        sol.validate()?;
        Ok(sol)
    }

    pub fn zeros(p_grid: Grid, s: u32) -> Result<Self> {
        let n = p_grid.len();
        WaveSolution::new(p_grid, vec![C64::default(); n], vec![C64::default(); n], s)
    }

    pub fn from_fn(
        p_grid: Grid,
        s: u32,
        plus: impl Fn(f64) -> C64,
        minus: impl Fn(f64) -> C64,
    ) -> Result<Self> {
        if p_grid.ndim() != 1 {
            return invalid("frequency grid must be one-dimensional");
        }
        let ps = p_grid.dims[0].nodes();
        let plus = ps.iter().map(|&p| plus(p)).collect();
        let minus = ps.iter().map(|&p| minus(p)).collect();
        WaveSolution::new(p_grid, plus, minus, s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p_grid.ndim() != 1 {
            return invalid("frequency grid must be one-dimensional");
        }
        let n = self.p_grid.len();
        for v in [&self.plus, &self.minus] {
            if v.len() != n {
                return Err(Error::Shape { expected: n, found: v.len() });
            }
        }
        for (i, v) in self.plus.iter().chain(&self.minus).enumerate() {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite { index: i % n });
            }
        }
        if self.s > 0 {
            let ax = self.axis();
            let scale = self.max_abs().max(f64::MIN_POSITIVE);
            for k in 0..n {
                if is_zero_node(ax.node(k), ax.spacing)
                    && (self.plus[k].norm() > 1e-12 * scale || self.minus[k].norm() > 1e-12 * scale)
                {
                    return Err(Error::Invariant(format!(
                        "s = {} requires f̂±(0) = 0, found ({}, {})",
                        self.s, self.plus[k], self.minus[k]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn axis(&self) -> Axis {
        self.p_grid.dims[0]
    }

    pub fn len(&self) -> usize {
        self.plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_empty()
    }

    pub fn p(&self) -> Vec<f64> {
        self.axis().nodes()
    }

    pub fn max_abs(&self) -> f64 {
        self.plus.iter().chain(&self.minus).map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Quadrature weights `|p|^{-s} Δp`; the `p = 0` bin gets weight 0 when `s > 0`.
    pub fn weights(&self) -> Vec<f64> {
        let ax = self.axis();
        (0..ax.count)
            .map(|k| {
                let p = ax.node(k);
                if self.s == 0 {
                    ax.spacing
                } else if is_zero_node(p, ax.spacing) {
                    0.0
                } else {
                    ax.spacing * p.abs().powi(-(self.s as i32))
                }
            })
            .collect()
    }

    fn check_compatible(&self, other: &WaveSolution) -> Result<()> {
        if self.s != other.s {
            return invalid(format!("Sobolev degrees differ: {} vs {}", self.s, other.s));
        }
        if self.p_grid != other.p_grid {
            return Err(Error::Grid("solutions live on different frequency grids".into()));
        }
        Ok(())
    }

    /// `⟨⟨self, other⟩⟩_s`, antilinear in `self`.
    pub fn inner(&self, other: &WaveSolution) -> Result<C64> {
        self.check_compatible(other)?;
        let w = self.weights();
        Ok((0..self.len())
            .map(|k| w[k] * (self.plus[k].conj() * other.plus[k] + self.minus[k].conj() * other.minus[k]))
            .sum())
    }

    /// `‖f‖²_s = Σ |p|^{-s} (|f̂₊|² + |f̂₋|²) Δp`.
    pub fn sobolev_norm_sq(&self) -> f64 {
        let w = self.weights();
        (0..self.len())
            .map(|k| w[k] * (self.plus[k].norm_sqr() + self.minus[k].norm_sqr()))
            .sum()
    }

    pub fn sobolev_norm(&self) -> f64 {
        self.sobolev_norm_sq().sqrt()
    }

    pub fn map(&self, f: impl Fn(f64, C64, C64) -> (C64, C64)) -> Result<WaveSolution> {
        let ps = self.p();
        let (plus, minus) = ps
            .iter()
            .enumerate()
            .map(|(k, &p)| f(p, self.plus[k], self.minus[k]))
            .unzip();
        WaveSolution::new(self.p_grid.clone(), plus, minus, self.s)
    }

    pub fn scale(&self, a: C64) -> WaveSolution {
        WaveSolution {
            p_grid: self.p_grid.clone(),
            plus: self.plus.iter().map(|v| v * a).collect(),
            minus: self.minus.iter().map(|v| v * a).collect(),
            s: self.s,
        }
    }

    pub fn add(&self, other: &WaveSolution) -> Result<WaveSolution> {
        self.check_compatible(other)?;
        Ok(WaveSolution {
            p_grid: self.p_grid.clone(),
            plus: self.plus.iter().zip(&other.plus).map(|(a, b)| a + b).collect(),
            minus: self.minus.iter().zip(&other.minus).map(|(a, b)| a + b).collect(),
            s: self.s,
        })
    }

    pub fn sub(&self, other: &WaveSolution) -> Result<WaveSolution> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Largest coefficient difference, relative to the largest coefficient of `self`.
    pub fn max_rel_diff(&self, other: &WaveSolution) -> Result<f64> {
        self.check_compatible(other)?;
        let d = self
            .plus
            .iter()
            .zip(&other.plus)
            .chain(self.minus.iter().zip(&other.minus))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        Ok(d / self.max_abs().max(f64::MIN_POSITIVE))
    }

    /// The same solution with the minus spectrum removed.
    pub fn plus_only(&self) -> WaveSolution {
        WaveSolution {
            minus: vec![C64::default(); self.len()],
            ..self.clone()
        }
    }
}

/// `f(x, t) = Σ e^{2πipu} f̂₊ Δp + Σ e^{2πipv} f̂₋ Δp`, `u = x + t`, `v = x − t`.
pub fn evaluate_spacetime(sol: &WaveSolution, pts: &[(f64, f64)]) -> Vec<C64> {
    use rayon::prelude::*;
    let ax = sol.axis();
    pts.par_iter()
        .map(|&(x, t)| {
            let a = mode_sum(&sol.plus, &ax, C64::new(x + t, 0.0), 0..ax.count);
            let b = mode_sum(&sol.minus, &ax, C64::new(x - t, 0.0), 0..ax.count);
            (a + b) * ax.spacing
        })
        .collect()
}

/// `Σ_{k ∈ range} c_k e^{2πi p_k w}` by a geometric recurrence, re-anchored
/// every 256 terms.
pub(crate) fn mode_sum(c: &[C64], ax: &Axis, w: C64, range: std::ops::Range<usize>) -> C64 {
    let two_pi_i = C64::new(0.0, 2.0 * std::f64::consts::PI);
    let ratio = (two_pi_i * ax.spacing * w).exp();
    let mut acc = C64::default();
    let mut e = C64::default();
    for (i, k) in range.enumerate() {
        if i % 256 == 0 {
            e = (two_pi_i * ax.node(k) * w).exp();
        }
        acc += c[k] * e;
        e *= ratio;
    }
    acc
}

/// The four frequency parts of a solution. The minus spectrum at `p > 0`
/// carries negative frequency, since `f̂₋` multiplies `e^{2πip(x − t)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyComponents {
    /// `f₊⁺`: `θ(p) f̂₊`.
    pub plus_pos: WaveSolution,
    /// `f₊⁻`: `θ(−p) f̂₊`.
    pub plus_neg: WaveSolution,
    /// `f₋⁻`: `θ(p) f̂₋`.
    pub minus_neg: WaveSolution,
    /// `f₋⁺`: `θ(−p) f̂₋`.
    pub minus_pos: WaveSolution,
}

impl FrequencyComponents {
    pub fn parts(&self) -> [&WaveSolution; 4] {
        [&self.plus_pos, &self.plus_neg, &self.minus_neg, &self.minus_pos]
    }

    /// `f⁺ = f₊⁺ + f₋⁺`.
    pub fn positive(&self) -> WaveSolution {
        self.plus_pos.add(&self.minus_pos).expect("parts share a grid")
    }

    /// `f⁻ = f₊⁻ + f₋⁻`.
    pub fn negative(&self) -> WaveSolution {
        self.plus_neg.add(&self.minus_neg).expect("parts share a grid")
    }
}

pub fn frequency_components(sol: &WaveSolution) -> FrequencyComponents {
    let part = |fp: fn(f64) -> f64, fm: fn(f64) -> f64| {
        sol.map(|p, a, b| (a * fp(p), b * fm(p))).expect("masking keeps the solution valid")
    };
    FrequencyComponents {
        plus_pos: part(theta, |_| 0.0),
        plus_neg: part(|p| theta(-p), |_| 0.0),
        minus_neg: part(|_| 0.0, theta),
        minus_pos: part(|_| 0.0, |p| theta(-p)),
    }
}

/// `ĝ±(p) = |p|^{(s_new − s)/2} f̂±(p)`, unitary from degree `s` to `s_new`.
pub fn weight_shift(sol: &WaveSolution, s_new: i64) -> Result<WaveSolution> {
    if s_new < 0 {
        return invalid(format!("target degree {s_new} is negative"));
    }
    let s_new = s_new as u32;
    let ax = sol.axis();
    let expo = (s_new as f64 - sol.s as f64) / 2.0;
    let mut plus = sol.plus.clone();
    let mut minus = sol.minus.clone();
    for k in 0..ax.count {
        let p = ax.node(k);
        if is_zero_node(p, ax.spacing) {
            if s_new != sol.s && (plus[k] != C64::default() || minus[k] != C64::default()) {
                return Err(Error::Invariant(
                    "the p = 0 coefficient is nonzero, so the degree cannot change".into(),
                ));
            }
            continue;
        }
        let w = p.abs().powf(expo);
        plus[k] *= w;
        minus[k] *= w;
    }
    WaveSolution::new(sol.p_grid.clone(), plus, minus, s_new)
}

/// A random smooth solution: each spectrum is `p^{s+1}` times a sum of three
/// Gaussian bumps with random complex weights and centres in `[−3, 3]`.
pub fn random_solution<R: Rng>(axis: Axis, s: u32, rng: &mut R) -> Result<WaveSolution> {
    let mut bumps = || -> Vec<(C64, f64)> {
        (0..3)
            .map(|_| {
                let c = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
                (c, rng.gen_range(-3.0..3.0))
            })
            .collect()
    };
    let bp = bumps();
    let bm = bumps();
    let eval = |bs: &[(C64, f64)], p: f64| -> C64 {
        let env: C64 = bs
            .iter()
            .map(|&(c, a)| c * (-std::f64::consts::PI * ((p - a) / 0.6).powi(2)).exp())
            .sum();
        env * p.powi(s as i32 + 1)
    };
    WaveSolution::from_fn(Grid::from_axis(axis), s, |p| eval(&bp, p), |p| eval(&bm, p))
}
