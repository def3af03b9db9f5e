use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::euclid::EuclideanPoint;
use super::wavelet::{Atom, AtomKind, AtomSolution, AstFunction, PlaneDesign};
use crate::error::{invalid, Error, Result};

/// `σ = [[a, b], [c, d]]` with `ad − bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sl2Element {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Sl2Element {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !((det - 1.0).abs() <= 1e-12) {
            return Err(Error::Invalid(format!("ad − bc = {det}, expected 1")));
        }
        Ok(Sl2Element { a, b, c, d })
    }

    pub fn identity() -> Self {
        Sl2Element { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// Translation `t(u) = [[1, u], [0, 1]]`.
    pub fn translation(u: f64) -> Self {
        Sl2Element { a: 1.0, b: u, c: 0.0, d: 1.0 }
    }

    /// `h(c, d) = [[1/d, 0], [c, d]]`.
    pub fn lower(c: f64, d: f64) -> Result<Self> {
        if d == 0.0 {
            return invalid("h(c, d) needs d ≠ 0");
        }
        Ok(Sl2Element { a: 1.0 / d, b: 0.0, c, d })
    }

    /// The element acting as `z → α z + β`: `a = √α`, `b = β/√α`, `c = 0`, `d = 1/√α`.
    pub fn affine(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return invalid("α must be positive");
        }
        let r = alpha.sqrt();
        Ok(Sl2Element { a: r, b: beta / r, c: 0.0, d: 1.0 / r })
    }

    pub fn inverse(&self) -> Self {
        Sl2Element { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn compose(&self, o: &Sl2Element) -> Self {
        Sl2Element {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// A random element with `|c| ≤ c_max`.
    pub fn random<R: Rng>(rng: &mut R, c_max: f64) -> Self {
        let a: f64 = rng.gen_range(0.5..2.0);
        let b: f64 = rng.gen_range(-1.0..1.0);
        let c: f64 = rng.gen_range(-c_max..=c_max);
        Sl2Element { a, b, c, d: (1.0 + b * c) / a }
    }

    fn denom(&self, z: C64) -> C64 {
        self.c * z + self.d
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MobiusImage {
    Finite(C64),
    Infinity,
}

impl MobiusImage {
    pub fn finite(self) -> Option<C64> {
        match self {
            MobiusImage::Finite(w) => Some(w),
            MobiusImage::Infinity => None,
        }
    }
}

/// `w = (az + b)/(cz + d)`.
pub fn mobius(sigma: &Sl2Element, z: C64) -> MobiusImage {
    let den = sigma.denom(z);
    if den.norm() == 0.0 {
        MobiusImage::Infinity
    } else {
        MobiusImage::Finite((sigma.a * z + sigma.b) / den)
    }
}

/// Coset of `σ` in `G/H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sl2Coset {
    /// `σ = t(u) h(c, d)` with `u = b/d`.
    Finite { u: f64, c: f64, d: f64 },
    /// `d = 0`.
    HInfinity,
}

pub fn sl2_decompose(sigma: &Sl2Element) -> Sl2Coset {
    if sigma.d == 0.0 {
        Sl2Coset::HInfinity
    } else {
        Sl2Coset::Finite {
            u: sigma.b / sigma.d,
            c: sigma.c,
            d: sigma.d,
        }
    }
}

/// `(B(σ⁻¹) F)(z) = (cz + d)^{−s−1} F((az + b)/(cz + d))`.
pub struct Sl2Transformed<'a, F: AstFunction + ?Sized> {
    pub inner: &'a F,
    pub sigma: Sl2Element,
}

impl<'a, F: AstFunction + ?Sized> Sl2Transformed<'a, F> {
    pub fn new(inner: &'a F, sigma: Sl2Element) -> Self {
        Sl2Transformed { inner, sigma }
    }
}

impl<F: AstFunction + ?Sized> AstFunction for Sl2Transformed<'_, F> {
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    fn ast(&self, z: C64) -> C64 {
        let s = self.inner.degree() as i32;
        match mobius(&self.sigma, z) {
            MobiusImage::Finite(w) => self.sigma.denom(z).powi(-s - 1) * self.inner.ast(w),
            MobiusImage::Infinity => C64::default(),
        }
    }
}

/// `B(σ⁻¹)` on a combination of `e_{w+}` atoms, using
/// `B(σ) e_{w+} = (c w* + d)^{−s−1} e_{σ(w)+}` with `σ⁻¹` in place of `σ`.
pub fn transform_atoms(f: &AtomSolution, sigma: &Sl2Element) -> Result<AtomSolution> {
    if f.kind != AtomKind::Plus {
        return invalid("SL(2,R) acts on single-component atoms");
    }
    let inv = sigma.inverse();
    let s = f.s as i32;
    let atoms = f
        .atoms
        .iter()
        .map(|at| {
            let w = at.z.z();
            let image = mobius(&inv, w).finite().ok_or_else(|| Error::Invalid("atom maps to infinity".into()))?;
            let factor = (inv.c * w.conj() + inv.d).powi(-s - 1);
            Ok(Atom {
                coeff: at.coeff * factor,
                z: EuclideanPoint::from_z(image),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    AtomSolution::new(f.s, AtomKind::Plus, atoms)
}

/// Sampled `F` on a plane design, transformed by `B(σ⁻¹)` with local cubic
/// interpolation in `(ξ, η)`. Nodes whose image falls outside the sampled
/// region are flagged in `valid` and set to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledAction {
    pub values: Vec<C64>,
    pub valid: Vec<bool>,
}

pub fn sl2_action(design: &PlaneDesign, values: &[C64], sigma: &Sl2Element, s: u32) -> Result<SampledAction> {
    design.validate()?;
    if s == 0 {
        return invalid("the weighted action needs s ≥ 1");
    }
    if values.len() != design.len() {
        return Err(Error::Shape { expected: design.len(), found: values.len() });
    }
    let (hx, he) = (design.xi_step(), design.eta_step());
    let mut out = Vec::with_capacity(values.len());
    let mut valid = Vec::with_capacity(values.len());
    for k in 0..design.len() {
        let z = design.point(k).z();
        let Some(w) = mobius(sigma, z).finite() else {
            out.push(C64::default());
            valid.push(false);
            continue;
        };
        let half = if w.im > 0.0 { 0 } else { 1 };
        let xi = (w.re / design.x0).asinh();
        let eta = w.im.abs().ln();
        let fi = (xi + design.xi_max) / hx;
        let fj = (eta - design.eta_min) / he;
        // four-point stencil needs one node on each side
        let i0 = fi.floor() as i64 - 1;
        let j0 = fj.floor() as i64 - 1;
        if i0 < 0 || j0 < 0 || i0 + 3 >= design.xi_count as i64 || j0 + 3 >= design.eta_count as i64 {
            out.push(C64::default());
            valid.push(false);
            continue;
        }
        let wi = lagrange4(fi - i0 as f64);
        let wj = lagrange4(fj - j0 as f64);
        let mut acc = C64::default();
        for (b, wb) in wj.iter().enumerate() {
            for (a, wa) in wi.iter().enumerate() {
                acc += wa * wb * values[design.index(half, j0 as usize + b, i0 as usize + a)];
            }
        }
        out.push(sigma.denom(z).powi(-(s as i32) - 1) * acc);
        valid.push(true);
    }
    Ok(SampledAction { values: out, valid })
}

/// Cubic Lagrange weights on nodes 0..3 at position `r`.
fn lagrange4(r: f64) -> [f64; 4] {
    let mut w = [1.0; 4];
    for (i, wi) in w.iter_mut().enumerate() {
        for j in 0..4 {
            if i != j {
                *wi *= (r - j as f64) / (i as f64 - j as f64);
            }
        }
    }
    w
}
