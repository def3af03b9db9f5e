//! Uniform sampling grids.
//!
//! Node `k` of an axis sits at `origin + k * spacing`. The dual (frequency)
//! axis has spacing `1 / (count * spacing)` and is centred on zero, with
//! `count / 2` nodes below zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One axis of a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub count: usize,
    pub spacing: f64,
    pub origin: f64,
}

impl Axis {
    pub fn new(count: usize, spacing: f64, origin: f64) -> Result<Self> {
        let axis = Axis {
            count,
            spacing,
            origin,
        };
        axis.validate()?;
        Ok(axis)
    }

    /// Axis with `count / 2` nodes below zero, the layout produced by [`Axis::dual`].
    pub fn centered(count: usize, spacing: f64) -> Result<Self> {
        Axis::new(count, spacing, -((count / 2) as f64) * spacing)
    }

    /// Axis symmetric under reflection about zero: node `k` and node
    /// `count - 1 - k` are negatives of each other. Even counts therefore
    /// straddle zero with a half-step offset.
    pub fn symmetric(count: usize, spacing: f64) -> Result<Self> {
        Axis::new(count, spacing, -0.5 * (count as f64 - 1.0) * spacing)
    }

    /// Axis with `count` nodes spanning the half-open interval `[lo, hi)`.
    pub fn periodic(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::Grid(format!("empty interval [{lo}, {hi})")));
        }
        Axis::new(count, (hi - lo) / count as f64, lo)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::Grid(format!("count {} < 2", self.count)));
        }
        if !(self.spacing > 0.0) || !self.spacing.is_finite() {
            return Err(Error::Grid(format!("spacing {} is not positive", self.spacing)));
        }
        if !self.origin.is_finite() {
            return Err(Error::Grid("origin is not finite".into()));
        }
        Ok(())
    }

    #[inline]
    pub fn node(&self, k: usize) -> f64 {
        self.origin + k as f64 * self.spacing
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.node(k)).collect()
    }

    /// Length of one period, `count * spacing`.
    pub fn period(&self) -> f64 {
        self.count as f64 * self.spacing
    }

    pub fn last(&self) -> f64 {
        self.node(self.count - 1)
    }

    /// Frequency axis paired with this axis by the DFT.
    pub fn dual(&self) -> Axis {
        let spacing = 1.0 / self.period();
        Axis {
            count: self.count,
            spacing,
            origin: -((self.count / 2) as f64) * spacing,
        }
    }

    /// True when the node set is symmetric about zero.
    pub fn is_symmetric(&self) -> bool {
        let tol = 1e-9 * self.spacing;
        (self.origin + self.last()).abs() <= tol
    }

    /// Index of the node equal to `x` (within `1e-9` spacings), if any.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let r = (x - self.origin) / self.spacing;
        let k = r.round();
        if (r - k).abs() <= 1e-9 && k >= 0.0 && (k as usize) < self.count {
            Some(k as usize)
        } else {
            None
        }
    }
}

/// A uniform n-dimensional grid, stored row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub dims: Vec<Axis>,
}

impl Grid {
    pub fn new(dims: Vec<Axis>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Grid("grid has no axes".into()));
        }
        for a in &dims {
            a.validate()?;
        }
        Ok(Grid { dims })
    }

    pub fn from_axis(axis: Axis) -> Self {
        Grid { dims: vec![axis] }
    }

    /// `n`-dimensional grid with the same axis repeated.
    pub fn cube(axis: Axis, n: usize) -> Result<Self> {
        Grid::new(vec![axis; n])
    }

    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self) -> usize {
        self.dims.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Product of spacings (the cell volume).
    pub fn cell(&self) -> f64 {
        self.dims.iter().map(|a| a.spacing).product()
    }

    pub fn dual(&self) -> Grid {
        Grid {
            dims: self.dims.iter().map(Axis::dual).collect(),
        }
    }

    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.ndim()];
        for k in (0..self.ndim().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1].count;
        }
        strides
    }

    /// Multi-index of a flat index.
    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.ndim()];
        for k in (0..self.ndim()).rev() {
            let c = self.dims[k].count;
            idx[k] = flat % c;
            flat /= c;
        }
        idx
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.dims)
            .fold(0, |acc, (&i, a)| acc * a.count + i)
    }

    /// Coordinates of a flat index.
    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.unravel(flat)
            .iter()
            .zip(&self.dims)
            .map(|(&i, a)| a.node(i))
            .collect()
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }

    pub fn same_shape(&self, other: &Grid) -> bool {
        self.ndim() == other.ndim()
            && self.dims.iter().zip(&other.dims).all(|(a, b)| a.count == b.count)
    }
}

/// Geometric node set on `[min, max]`, used for speeds, radii and `t′`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogAxis {
    pub count: usize,
    pub min: f64,
    pub max: f64,
}

impl LogAxis {
    pub fn new(count: usize, min: f64, max: f64) -> Result<Self> {
        if count < 2 {
            return Err(Error::Grid(format!("log axis count {count} < 2")));
        }
        if !(min > 0.0 && max > min && max.is_finite()) {
            return Err(Error::Grid(format!("log axis needs 0 < min < max, got [{min}, {max}]")));
        }
        Ok(LogAxis { count, min, max })
    }

    /// Step in `ln` between neighbouring nodes.
    pub fn log_step(&self) -> f64 {
        (self.max / self.min).ln() / (self.count - 1) as f64
    }

    pub fn node(&self, k: usize) -> f64 {
        (self.min.ln() + k as f64 * self.log_step()).exp()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.node(k)).collect()
    }

    /// Trapezoid weights for `∫ g(t) d(ln t)`.
    pub fn log_weights(&self) -> Vec<f64> {
        let h = self.log_step();
        (0..self.count)
            .map(|k| if k == 0 || k + 1 == self.count { 0.5 * h } else { h })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_spacing() {
        let a = Axis::periodic(-8.0, 8.0, 256).unwrap();
        let d = a.dual();
        assert!((d.spacing - 1.0 / 16.0).abs() < 1e-15);
        assert!((d.origin + 8.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_axes() {
        assert!(Axis::new(1, 1.0, 0.0).is_err());
        assert!(Axis::new(4, 0.0, 0.0).is_err());
        assert!(Axis::new(4, -1.0, 0.0).is_err());
        assert!(Grid::new(vec![]).is_err());
    }

    #[test]
    fn symmetric_axes() {
        for n in [7, 8] {
            let a = Axis::symmetric(n, 0.5).unwrap();
            assert!(a.is_symmetric());
            for k in 0..n {
                assert!((a.node(k) + a.node(n - 1 - k)).abs() < 1e-12);
            }
        }
        assert_eq!(Axis::symmetric(7, 0.5).unwrap().index_of(0.0), Some(3));
        assert_eq!(Axis::symmetric(8, 0.5).unwrap().index_of(0.0), None);
    }

    #[test]
    fn ravel_roundtrip() {
        let g = Grid::new(vec![
            Axis::new(3, 1.0, 0.0).unwrap(),
            Axis::new(4, 1.0, 0.0).unwrap(),
            Axis::new(5, 1.0, 0.0).unwrap(),
        ])
        .unwrap();
        for k in 0..g.len() {
            assert_eq!(g.ravel(&g.unravel(k)), k);
        }
        assert_eq!(g.strides(), vec![20, 5, 1]);
    }

    #[test]
    fn log_axis_weights() {
        let l = LogAxis::new(11, 1e-2, 1e2).unwrap();
        let s: f64 = l.log_weights().iter().sum();
        assert!((s - (1e4f64).ln()).abs() < 1e-12);
        assert!((l.node(10) - 1e2).abs() < 1e-10);
    }
}
