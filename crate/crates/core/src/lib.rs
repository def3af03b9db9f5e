//! Windowed X-ray and Radon transforms with exact reconstruction, the
//! Analytic-Signal Transform, and wavelets for the 1+1D wave equation.
//!
//! Fourier transforms use the kernel `e^{-2πip·x}` throughout, so
//! `e^{-πx²}` is its own transform.

pub mod ast;
pub mod error;
pub mod grid;
pub mod quad;
pub mod radon;
pub mod spectral;
pub mod synth;
pub mod checks;
pub mod demo;
pub mod wave;
pub mod window;
pub mod wrs;
pub mod xray;

pub use error::{Error, Result};
pub use grid::{Axis, Grid, LogAxis};
pub use num_complex::Complex64 as C64;
pub use spectral::{dft, idft, SampledSignal, SpectralSignal};
pub use window::{builtin_window, Window};
