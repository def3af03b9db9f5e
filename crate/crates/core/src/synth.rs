//! Random test signals.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};
use crate::grid::Grid;
use crate::spectral::{idft, SampledSignal, SpectralSignal};

/// A random trigonometric polynomial on `grid` whose modes satisfy
/// `lo ≤ |p| ≤ hi`, scaled to unit sup-norm.
pub fn bandlimited<R: Rng>(grid: &Grid, lo: f64, hi: f64, rng: &mut R) -> Result<SampledSignal> {
    if !(lo >= 0.0 && hi >= lo) {
        return invalid(format!("band [{lo}, {hi}] is empty"));
    }
    let dual = grid.dual();
    let values = (0..dual.len())
        .map(|k| {
            let p = dual.point(k);
            let r = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            let c = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            if r >= lo && r <= hi {
                c
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    let spec = SpectralSignal::new(grid.clone(), values)?;
    let f = idft(&spec)?;
    let m = f.max_abs();
    if m == 0.0 {
        return invalid(format!("no grid frequency lies in [{lo}, {hi}]"));
    }
    Ok(f.scale(C64::new(1.0 / m, 0.0)))
}

/// Real part of [`bandlimited`], rescaled to unit sup-norm.
pub fn bandlimited_real<R: Rng>(grid: &Grid, lo: f64, hi: f64, rng: &mut R) -> Result<SampledSignal> {
    let f = bandlimited(grid, lo, hi, rng)?;
    let re = SampledSignal::new(grid.clone(), f.values.iter().map(|v| C64::new(v.re, 0.0)).collect())?;
    let m = re.max_abs();
    Ok(re.scale(C64::new(1.0 / m, 0.0)))
}

/// `e^{-π|x − c|²/w²}`.
pub fn gaussian(grid: &Grid, center: &[f64], width: f64) -> Result<SampledSignal> {
    SampledSignal::from_fn(grid.clone(), |x| {
        let r2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
        C64::new((-std::f64::consts::PI * r2 / (width * width)).exp(), 0.0)
    })
}
