//! Sampled signals and the discrete Fourier pair.
//!
//! The transform approximates `f̂(p) = ∫ f(x) e^{-2πi p·x} dx` by a Riemann
//! sum over the grid, so `f̂ = Δx Σ f e^{-2πipx}` and the inverse carries `Δp`.
//! With that scaling `Σ|f|²Δx = Σ|f̂|²Δp` holds exactly.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{Axis, Grid};

fn check_values(grid: &Grid, values: &[C64]) -> Result<()> {
    if values.len() != grid.len() {
        return Err(Error::Shape {
            expected: grid.len(),
            found: values.len(),
        });
    }
    if let Some(index) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::NonFinite { index });
    }
    Ok(())
}

/// Samples of `f` on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    pub grid: Grid,
    pub values: Vec<C64>,
}

impl SampledSignal {
    pub fn new(grid: Grid, values: Vec<C64>) -> Result<Self> {
        check_values(&grid, &values)?;
        Ok(SampledSignal { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        let n = grid.len();
        SampledSignal {
            grid,
            values: vec![C64::new(0.0, 0.0); n],
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> C64) -> Result<Self> {
        let values = (0..grid.len()).map(|k| f(&grid.point(k))).collect();
        SampledSignal::new(grid, values)
    }

    pub fn ndim(&self) -> usize {
        self.grid.ndim()
    }

    /// `Σ|f|² Δx`.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.cell()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `Σ conj(self) other Δx`.
    pub fn inner(&self, other: &SampledSignal) -> C64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            * self.grid.cell()
    }

    /// Relative L² distance `‖self − reference‖ / ‖reference‖`.
    pub fn rel_l2_error(&self, reference: &SampledSignal) -> f64 {
        let num: f64 = self
            .values
            .iter()
            .zip(&reference.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let den: f64 = reference.values.iter().map(|v| v.norm_sqr()).sum();
        if den == 0.0 {
            num.sqrt()
        } else {
            (num / den).sqrt()
        }
    }

    pub fn scale(&self, a: C64) -> SampledSignal {
        SampledSignal {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * a).collect(),
        }
    }

    pub fn add(&self, other: &SampledSignal) -> Result<SampledSignal> {
        if !self.grid.same_shape(&other.grid) {
            return Err(Error::Shape {
                expected: self.grid.len(),
                found: other.grid.len(),
            });
        }
        Ok(SampledSignal {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }
}

/// Spectrum `f̂` on the frequency grid, remembering the spatial grid it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSignal {
    pub grid: Grid,
    pub spatial: Grid,
    pub values: Vec<C64>,
}

impl SpectralSignal {
    /// Spectrum on the dual of `spatial`.
    pub fn new(spatial: Grid, values: Vec<C64>) -> Result<Self> {
        let grid = spatial.dual();
        check_values(&grid, &values)?;
        Ok(SpectralSignal {
            grid,
            spatial,
            values,
        })
    }

    /// Spectrum on an explicit frequency grid; spacings must satisfy `Δx Δp N = 1`.
    pub fn with_grids(grid: Grid, spatial: Grid, values: Vec<C64>) -> Result<Self> {
        if grid.ndim() != spatial.ndim() {
            return Err(Error::Grid("frequency and spatial grids differ in dimension".into()));
        }
        for (p, x) in grid.dims.iter().zip(&spatial.dims) {
            let prod = p.spacing * x.spacing * p.count as f64;
            if p.count != x.count || (prod - 1.0).abs() > 1e-9 {
                return Err(Error::Grid("frequency grid is not dual to the spatial grid".into()));
            }
        }
        check_values(&grid, &values)?;
        Ok(SpectralSignal {
            grid,
            spatial,
            values,
        })
    }

    pub fn from_fn(spatial: Grid, f: impl Fn(&[f64]) -> C64) -> Result<Self> {
        let grid = spatial.dual();
        let values = (0..grid.len()).map(|k| f(&grid.point(k))).collect();
        SpectralSignal::new(spatial, values)
    }

    /// `Σ|f̂|² Δp`.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.cell()
    }

    /// Pointwise product with a multiplier evaluated at each frequency node.
    pub fn map(&self, m: impl Fn(&[f64], C64) -> C64) -> SpectralSignal {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| m(&self.grid.point(k), v))
            .collect();
        SpectralSignal {
            grid: self.grid.clone(),
            spatial: self.spatial.clone(),
            values,
        }
    }

    /// Trigonometric interpolant `Σ_p f̂(p) e^{2πip·x} Δp` at an arbitrary point.
    pub fn eval(&self, x: &[f64]) -> C64 {
        let phases = axis_phases(&self.grid, x);
        tensor_contract(&self.grid, &self.values, &phases) * self.grid.cell()
    }

    /// Values of the interpolant along the line `x + v t_k`, `t_k = t0 + k dt`.
    pub fn eval_line(&self, x: &[f64], v: &[f64], t0: f64, dt: f64, count: usize) -> Vec<C64> {
        let cell = self.grid.cell();
        let mut cur = Vec::with_capacity(self.grid.len());
        let mut step = Vec::with_capacity(self.grid.len());
        for k in 0..self.grid.len() {
            let p = self.grid.point(k);
            let px: f64 = p.iter().zip(x).map(|(a, b)| a * b).sum();
            let pv: f64 = p.iter().zip(v).map(|(a, b)| a * b).sum();
            cur.push(self.values[k] * cell * C64::from_polar(1.0, 2.0 * PI * (px + pv * t0)));
            step.push(C64::from_polar(1.0, 2.0 * PI * pv * dt));
        }
        let mut out = Vec::with_capacity(count);
        for j in 0..count {
            if j > 0 && j % 64 == 0 {
                // refresh the recurrence to keep the phase drift at round-off
                let t = t0 + j as f64 * dt;
                for k in 0..self.grid.len() {
                    let p = self.grid.point(k);
                    let px: f64 = p.iter().zip(x).map(|(a, b)| a * b).sum();
                    let pv: f64 = p.iter().zip(v).map(|(a, b)| a * b).sum();
                    cur[k] = self.values[k] * cell * C64::from_polar(1.0, 2.0 * PI * (px + pv * t));
                }
            }
            out.push(cur.iter().sum());
            for (c, s) in cur.iter_mut().zip(&step) {
                *c *= s;
            }
        }
        out
    }
}

/// Per-axis phase vectors `e^{2πi p_j x_a}`.
fn axis_phases(grid: &Grid, x: &[f64]) -> Vec<Vec<C64>> {
    grid.dims
        .iter()
        .zip(x)
        .map(|(a, &xa)| {
            (0..a.count)
                .map(|j| C64::from_polar(1.0, 2.0 * PI * a.node(j) * xa))
                .collect()
        })
        .collect()
}

/// `Σ_idx values[idx] Π_a phases[a][idx_a]`, contracting the last axis first.
fn tensor_contract(grid: &Grid, values: &[C64], phases: &[Vec<C64>]) -> C64 {
    let mut cur: Vec<C64> = values.to_vec();
    for a in (0..grid.ndim()).rev() {
        let c = grid.dims[a].count;
        let ph = &phases[a];
        cur = cur
            .chunks(c)
            .map(|chunk| chunk.iter().zip(ph).map(|(v, w)| v * w).sum())
            .collect();
    }
    cur[0]
}

struct AxisPlan {
    fft: Arc<dyn Fft<f64>>,
    pre: Vec<C64>,
    post: Vec<C64>,
}

fn plan_axis(planner: &mut FftPlanner<f64>, x: &Axis, p: &Axis, dir: FftDirection) -> AxisPlan {
    let n = x.count;
    let fft = planner.plan_fft(n, dir);
    match dir {
        FftDirection::Forward => {
            // F_j = Δx e^{-2πi p_j x0} Σ_k [f_k e^{-2πi p0 kΔx}] e^{-2πijk/N}
            let pre = (0..n)
                .map(|k| C64::from_polar(1.0, -2.0 * PI * p.origin * k as f64 * x.spacing))
                .collect();
            let post = (0..n)
                .map(|j| C64::from_polar(x.spacing, -2.0 * PI * p.node(j) * x.origin))
                .collect();
            AxisPlan { fft, pre, post }
        }
        FftDirection::Inverse => {
            // f_k = Δp e^{2πi p0 x_k} Σ_j [F_j e^{2πi jΔp x0}] e^{2πijk/N}
            let pre = (0..n)
                .map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 * p.spacing * x.origin))
                .collect();
            let post = (0..n)
                .map(|k| C64::from_polar(p.spacing, 2.0 * PI * p.origin * x.node(k)))
                .collect();
            AxisPlan { fft, pre, post }
        }
    }
}

fn transform(values: &mut [C64], spatial: &Grid, freq: &Grid, dir: FftDirection) {
    let mut planner = FftPlanner::new();
    let strides = spatial.strides();
    let total = spatial.len();
    for a in 0..spatial.ndim() {
        let n = spatial.dims[a].count;
        let stride = strides[a];
        let plan = plan_axis(&mut planner, &spatial.dims[a], &freq.dims[a], dir);
        let mut line = vec![C64::new(0.0, 0.0); n];
        let mut scratch = vec![C64::new(0.0, 0.0); plan.fft.get_inplace_scratch_len()];
        let outer = total / (n * stride);
        for o in 0..outer {
            for i in 0..stride {
                let base = o * n * stride + i;
                for k in 0..n {
                    line[k] = values[base + k * stride] * plan.pre[k];
                }
                plan.fft.process_with_scratch(&mut line, &mut scratch);
                for k in 0..n {
                    values[base + k * stride] = line[k] * plan.post[k];
                }
            }
        }
    }
}

/// Forward transform onto the dual grid.
pub fn dft(f: &SampledSignal) -> Result<SpectralSignal> {
    check_values(&f.grid, &f.values)?;
    let freq = f.grid.dual();
    let mut values = f.values.clone();
    transform(&mut values, &f.grid, &freq, FftDirection::Forward);
    Ok(SpectralSignal {
        grid: freq,
        spatial: f.grid.clone(),
        values,
    })
}

/// Inverse transform back onto the stored spatial grid.
pub fn idft(spec: &SpectralSignal) -> Result<SampledSignal> {
    check_values(&spec.grid, &spec.values)?;
    if !spec.grid.same_shape(&spec.spatial) {
        return Err(Error::Shape {
            expected: spec.spatial.len(),
            found: spec.grid.len(),
        });
    }
    let mut values = spec.values.clone();
    transform(&mut values, &spec.spatial, &spec.grid, FftDirection::Inverse);
    Ok(SampledSignal {
        grid: spec.spatial.clone(),
        values,
    })
}
