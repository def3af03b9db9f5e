use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::solution::WaveSolution;
use crate::error::{invalid, Error, Result};
use crate::grid::Axis;

/// Linear symmetries of the wave equation acting on `(f̂₊, f̂₋)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Symmetry {
    /// Light-cone translation `f₊(u) → f₊(u − u0)`, `f₋(v) → f₋(v − v0)`.
    Translate { u0: f64, v0: f64 },
    /// Lorentz boost with rapidity factor `λ > 0`.
    Lorentz(f64),
    /// Space reflection `x → −x`.
    Parity,
    /// Total reflection `(x, t) → (−x, −t)`.
    Reflect,
    /// Dilation by `α > 0`.
    Dilation(f64),
}

impl Symmetry {
    /// Translation by `x0` in space and `t0` in time.
    pub fn spacetime(x0: f64, t0: f64) -> Symmetry {
        Symmetry::Translate { u0: x0 + t0, v0: x0 - t0 }
    }

    pub fn space(x0: f64) -> Symmetry {
        Symmetry::spacetime(x0, 0.0)
    }
}

/// Real weight `κ = (s + 1)/2`.
pub fn kappa_of(s: u32) -> C64 {
    C64::new((s as f64 + 1.0) / 2.0, 0.0)
}

/// Applies `op` with weight `κ`, where `2 Re κ − 1` must equal `sol.s`.
pub fn apply_symmetry(sol: &WaveSolution, op: Symmetry, kappa: C64) -> Result<WaveSolution> {
    if (2.0 * kappa.re - 1.0 - sol.s as f64).abs() > 1e-12 {
        return invalid(format!("2 Re κ − 1 = {} does not match s = {}", 2.0 * kappa.re - 1.0, sol.s));
    }
    let ax = sol.axis();
    let one = C64::new(1.0, 0.0);
    let (plus, minus) = match op {
        Symmetry::Translate { u0, v0 } => {
            let ps = ax.nodes();
            let phase = |p: f64, a: f64| C64::from_polar(1.0, -2.0 * PI * p * a);
            (
                sol.plus.iter().zip(&ps).map(|(c, &p)| c * phase(p, u0)).collect(),
                sol.minus.iter().zip(&ps).map(|(c, &p)| c * phase(p, v0)).collect(),
            )
        }
        Symmetry::Parity => {
            require_symmetric(&ax)?;
            (reversed(&sol.minus), reversed(&sol.plus))
        }
        Symmetry::Reflect => {
            require_symmetric(&ax)?;
            (reversed(&sol.plus), reversed(&sol.minus))
        }
        Symmetry::Lorentz(lambda) => {
            positive("λ", lambda)?;
            let a = C64::new(lambda, 0.0).powc(one - kappa);
            let b = C64::new(lambda, 0.0).powc(kappa - one);
            (
                scaled(resample(&ax, &sol.plus, lambda, "f̂₊")?, a),
                scaled(resample(&ax, &sol.minus, 1.0 / lambda, "f̂₋")?, b),
            )
        }
        Symmetry::Dilation(alpha) => {
            positive("α", alpha)?;
            let a = C64::new(alpha, 0.0).powc(one - kappa);
            (
                scaled(resample(&ax, &sol.plus, alpha, "f̂₊")?, a),
                scaled(resample(&ax, &sol.minus, alpha, "f̂₋")?, a),
            )
        }
    };
    WaveSolution::new(sol.p_grid.clone(), plus, minus, sol.s)
}

/// `apply_symmetry` with the real weight `κ = (s + 1)/2`.
pub fn apply(sol: &WaveSolution, op: Symmetry) -> Result<WaveSolution> {
    apply_symmetry(sol, op, kappa_of(sol.s))
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        invalid(format!("{name} = {v} must be positive"))
    }
}

fn require_symmetric(ax: &Axis) -> Result<()> {
    if ax.is_symmetric() {
        Ok(())
    } else {
        Err(Error::Grid("reflections need a frequency grid symmetric about 0".into()))
    }
}

fn reversed(v: &[C64]) -> Vec<C64> {
    v.iter().rev().copied().collect()
}

fn scaled(v: Vec<C64>, a: C64) -> Vec<C64> {
    v.into_iter().map(|c| c * a).collect()
}

/// Samples `g(p) = f(scale · p)` on the same axis. Targets that land on a
/// node are copied; others use the Dirichlet kernel of the axis, which is
/// exact for spectra of functions supported in one period `1/Δp`.
pub(crate) fn resample(ax: &Axis, f: &[C64], scale: f64, what: &str) -> Result<Vec<C64>> {
    if scale == 1.0 {
        return Ok(f.to_vec());
    }
    let peak = f.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(f.to_vec());
    }
    let support = (0..ax.count)
        .filter(|&k| f[k].norm() > 1e-12 * peak)
        .map(|k| ax.node(k).abs())
        .fold(0.0, f64::max);
    let room = ax.origin.abs().min(ax.last().abs());
    if support / scale > room + 0.5 * ax.spacing {
        return Err(Error::Aliasing(format!(
            "{what} reaches |p| = {support:.4}; scaling by {scale} moves it to {:.4}, beyond the grid edge {room:.4}",
            support / scale
        )));
    }
    let n = ax.count;
    let dp = ax.spacing;
    let lo = ax.origin;
    let hi = ax.last();
    Ok((0..n)
        .map(|k| {
            let q = scale * ax.node(k);
            if q < lo - 1e-9 * dp || q > hi + 1e-9 * dp {
                return C64::default();
            }
            if let Some(m) = ax.index_of(q) {
                return f[m];
            }
            let r = (q - lo) / dp;
            let num = (PI * r).sin();
            let mut acc = C64::default();
            for (m, c) in f.iter().enumerate() {
                let den = (PI * (r - m as f64) / n as f64).sin();
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                acc += c * (sign / den);
            }
            acc * (num / n as f64)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wave::solution::{default_p_axis, random_solution};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sol(seed: u64, s: u32) -> WaveSolution {
        let ax = default_p_axis(8.0, 1.0 / 64.0).unwrap();
        random_solution(ax, s, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
    }

    #[test]
    fn reflections_are_involutions() {
        let f = sol(1, 1);
        for op in [Symmetry::Parity, Symmetry::Reflect] {
            let g = apply(&apply(&f, op).unwrap(), op).unwrap();
            assert_eq!(g, f);
        }
    }

    #[test]
    fn lorentz_parity_relation() {
        for seed in 0..3 {
            let f = sol(seed, 1);
            for lambda in [1.3, 0.8, 1.2] {
                let lp = apply(&apply(&f, Symmetry::Parity).unwrap(), Symmetry::Lorentz(lambda)).unwrap();
                let pl = apply(&apply(&f, Symmetry::Lorentz(1.0 / lambda)).unwrap(), Symmetry::Parity).unwrap();
                assert!(lp.max_rel_diff(&pl).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn unitarity() {
        for s in [0, 1, 2] {
            let f = sol(7 + s as u64, s);
            let n0 = f.sobolev_norm_sq();
            for op in [
                Symmetry::spacetime(0.7, -1.1),
                Symmetry::Lorentz(1.7),
                Symmetry::Lorentz(0.8),
                Symmetry::Dilation(2.0),
                Symmetry::Dilation(0.75),
                Symmetry::Parity,
                Symmetry::Reflect,
            ] {
                let n1 = apply(&f, op).unwrap().sobolev_norm_sq();
                assert!(((n1 - n0) / n0).abs() < 1e-6, "{op:?} s={s}: {n0} vs {n1}");
            }
        }
    }

    #[test]
    fn translation_is_exactly_unitary() {
        let f = sol(3, 1);
        let g = apply(&f, Symmetry::spacetime(3.5, 2.25)).unwrap();
        assert!(((g.sobolev_norm_sq() - f.sobolev_norm_sq()) / f.sobolev_norm_sq()).abs() < 1e-14);
    }

    #[test]
    fn dilation_off_grid_is_aliasing() {
        let f = sol(2, 1);
        let err = apply(&f, Symmetry::Dilation(0.3)).unwrap_err();
        assert!(matches!(err, Error::Aliasing(_)), "{err}");
    }

    #[test]
    fn weight_must_match_degree() {
        let f = sol(2, 1);
        assert!(apply_symmetry(&f, Symmetry::Parity, C64::new(0.5, 0.0)).is_err());
        // complex κ with the right real part is accepted
        let g = apply_symmetry(&f, Symmetry::Dilation(2.0), C64::new(1.0, 0.4)).unwrap();
        assert!(((g.sobolev_norm_sq() - f.sobolev_norm_sq()) / f.sobolev_norm_sq()).abs() < 1e-6);
    }

    #[test]
    fn dirichlet_resampling_of_a_mode_packet() {
        // f̂(p) = e^{-π p²} is the spectrum of a Gaussian far inside the period
        let ax = Axis::symmetric(512, 1.0 / 32.0).unwrap();
        let f: Vec<C64> = ax.nodes().iter().map(|p| C64::new((-PI * p * p).exp(), 0.0)).collect();
        let g = resample(&ax, &f, 0.9, "test").unwrap();
        for (k, v) in g.iter().enumerate() {
            let q = 0.9 * ax.node(k);
            assert!((v.re - (-PI * q * q).exp()).abs() < 1e-12);
        }
    }
}
