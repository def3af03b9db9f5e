//! Quadrature rules.

use num_complex::Complex64 as C64;

use crate::error::{invalid, Result};

/// Periodic (rectangle) rule `h Σ f_k`, the trapezoid rule for periodic data.
pub fn quad_1d(samples: &[C64], spacing: f64) -> Result<C64> {
    check(samples, spacing)?;
    Ok(samples.iter().sum::<C64>() * spacing)
}

/// Composite trapezoid rule with halved end points.
pub fn trapezoid(samples: &[C64], spacing: f64) -> Result<C64> {
    check(samples, spacing)?;
    let n = samples.len();
    let inner: C64 = samples[1..n - 1].iter().sum();
    Ok((inner + 0.5 * (samples[0] + samples[n - 1])) * spacing)
}

fn check(samples: &[C64], spacing: f64) -> Result<()> {
    if samples.len() < 2 {
        return invalid(format!("quadrature needs at least 2 samples, got {}", samples.len()));
    }
    if !(spacing > 0.0 && spacing.is_finite()) {
        return invalid(format!("spacing {spacing} is not positive"));
    }
    if samples.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return invalid("non-finite quadrature sample");
    }
    Ok(())
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Result of [`radial_log_integral`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialIntegral {
    pub value: f64,
    /// The dyadic shells stopped shrinking near `r = 0`: log divergence.
    pub divergent: bool,
}

/// Smallest radius reached by the dyadic shells.
pub const RADIAL_FLOOR: f64 = 1e-12;
const SHELL_NODES: usize = 20;

/// `∫₀^{r_max} g(r) dr / r` over dyadic shells `[r/2, r]`, each integrated by
/// Gauss–Legendre in `ln r`, down to [`RADIAL_FLOOR`].
///
/// `g` is expected to be non-negative. Divergence is declared when the last
/// shell still carries mass comparable to its neighbour and its mean value of
/// `g` exceeds `tol²` (so `g(0) ≈ |ĥ(0)|²` with `|ĥ(0)| > tol`).
pub fn radial_log_integral(g: impl Fn(f64) -> f64, r_max: f64, tol: f64) -> RadialIntegral {
    let (x, w) = gauss_legendre(SHELL_NODES);
    let half = 0.5 * std::f64::consts::LN_2;
    let mut hi = r_max;
    let mut total = 0.0;
    let mut shells = Vec::new();
    while hi > RADIAL_FLOOR {
        let mid = hi.ln() - half;
        let s: f64 = x
            .iter()
            .zip(&w)
            .map(|(xi, wi)| wi * g((mid + half * xi).exp()))
            .sum::<f64>()
            * half;
        total += s;
        shells.push(s);
        hi *= 0.5;
    }
    let n = shells.len();
    let last = shells[n - 1];
    let prev = shells[n - 2];
    let mean_g = last / std::f64::consts::LN_2;
    let divergent = mean_g > tol * tol && last > 0.5 * prev;
    RadialIntegral {
        value: total,
        divergent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn periodic_constant() {
        let v = vec![C64::new(1.0, 0.0); 37];
        assert!((quad_1d(&v, 0.25).unwrap().re - 37.0 * 0.25).abs() < 1e-14);
        assert!((trapezoid(&v, 0.25).unwrap().re - 36.0 * 0.25).abs() < 1e-14);
    }

    #[test]
    fn gaussian_integral() {
        let h = 1e-3;
        let v: Vec<C64> = (0..=16000)
            .map(|k| {
                let x = -8.0 + k as f64 * h;
                C64::new((-PI * x * x).exp(), 0.0)
            })
            .collect();
        assert!((trapezoid(&v, h).unwrap().re - 1.0).abs() < 1e-8);
        assert!((quad_1d(&v, h).unwrap().re - 1.0).abs() < 1e-8);
    }

    #[test]
    fn odd_function_vanishes() {
        let h = 0.01;
        let v: Vec<C64> = (0..=2000)
            .map(|k| {
                let x = -10.0 + k as f64 * h;
                C64::new(x.powi(3) * (-x * x).exp(), x.sin())
            })
            .collect();
        assert!(trapezoid(&v, h).unwrap().norm() < 1e-12);
    }

    #[test]
    fn rejects_empty() {
        assert!(quad_1d(&[], 1.0).is_err());
        assert!(quad_1d(&[C64::new(1.0, 0.0)], 1.0).is_err());
    }

    #[test]
    fn gauss_legendre_exactness() {
        for n in [2, 5, 12, 20] {
            let (x, w) = gauss_legendre(n);
            for deg in 0..2 * n {
                let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn radial_shells() {
        // ∫ r e^{-2π r²} dr = 1/(4π)
        let r = radial_log_integral(|r| r * r * (-2.0 * PI * r * r).exp(), 6.0, 1e-8);
        assert!(!r.divergent);
        assert!((r.value - 1.0 / (4.0 * PI)).abs() < 1e-12);
        let d = radial_log_integral(|r| (-4.0 * PI * r).exp(), 6.0, 1e-8);
        assert!(d.divergent);
    }
}
