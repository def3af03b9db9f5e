//! Deterministic demo signals and wave solutions.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{Axis, Grid};
use crate::synth::{bandlimited, gaussian};
use crate::wave::{default_p_axis, Atom, AtomKind, AtomSolution, EuclideanPoint, WaveSolution};
use crate::wrs::{solution_records, Record};

pub const DEMOS: [&str; 4] = ["gauss2d", "bandlimited2d", "wavepacket1p1", "two-wavelet"];

/// The 64² grid of spacing 0.1 used by the X-ray demos.
pub fn demo_grid() -> Result<Grid> {
    Grid::cube(Axis::new(64, 0.1, -3.2)?, 2)
}

/// Frequency axis of the wave demos: `|p| ≤ 8`, `Δp = 1/64`.
pub fn demo_p_axis() -> Result<Axis> {
    default_p_axis(8.0, 1.0 / 64.0)
}

/// `f̂₊(p) = e^{−π((p − 1)/0.25)²}`, `f̂₋ = 0`, `s = 1`.
pub fn wavepacket() -> Result<WaveSolution> {
    WaveSolution::from_fn(
        Grid::from_axis(demo_p_axis()?),
        1,
        |p| C64::new((-std::f64::consts::PI * ((p - 1.0) / 0.25).powi(2)).exp(), 0.0),
        |_| C64::default(),
    )
}

/// `e_{z1} + e_{z2}` with `z1 = (0, 1)`, `z2 = (2, 0.5)`.
pub fn two_wavelet(s: u32) -> Result<AtomSolution> {
    let one = C64::new(1.0, 0.0);
    AtomSolution::new(
        s,
        AtomKind::Full,
        vec![
            Atom { coeff: one, z: EuclideanPoint::new(0.0, 1.0) },
            Atom { coeff: one, z: EuclideanPoint::new(2.0, 0.5) },
        ],
    )
}

/// Records for demo `name`. The seed only affects `bandlimited2d`.
pub fn generate_demo(name: &str, seed: u64) -> Result<Vec<Record>> {
    let tag = |r: Record| r.with("demo", name);
    match name {
        "gauss2d" => {
            let f = gaussian(&demo_grid()?, &[0.0, 0.0], 1.0)?;
            Ok(vec![tag(Record::new(f.grid, f.values))])
        }
        "bandlimited2d" => {
            let f = bandlimited(&demo_grid()?, 0.5, 4.0, &mut ChaCha8Rng::seed_from_u64(seed))?;
            Ok(vec![tag(Record::new(f.grid, f.values)).with("seed", seed)])
        }
        "wavepacket1p1" => Ok(solution_records(&wavepacket()?).into_iter().map(tag).collect()),
        "two-wavelet" => {
            let atoms = two_wavelet(1)?;
            let sol = atoms.to_solution(&Grid::from_axis(demo_p_axis()?))?;
            let json = serde_json::to_value(&atoms).map_err(|e| Error::Format(e.to_string()))?;
            let [p, m] = solution_records(&sol);
            Ok(vec![tag(p).with("atoms", json), tag(m)])
        }
        _ => Err(Error::Unknown {
            kind: "demo",
            name: name.into(),
            options: DEMOS.join(", "),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wrs::{atoms_of, read_all, solution_from_records, write_record};

    fn bytes(name: &str, seed: u64) -> Vec<u8> {
        let mut buf = Vec::new();
        for r in generate_demo(name, seed).unwrap() {
            write_record(&mut buf, &r).unwrap();
        }
        buf
    }

    #[test]
    fn deterministic() {
        for name in DEMOS {
            assert_eq!(bytes(name, 0), bytes(name, 0), "{name}");
        }
        assert_ne!(bytes("bandlimited2d", 0), bytes("bandlimited2d", 1));
    }

    #[test]
    fn wavepacket_is_plus_only() {
        let recs = read_all(&bytes("wavepacket1p1", 0)[..]).unwrap();
        let sol = solution_from_records(&recs, None).unwrap();
        assert_eq!(sol.s, 1);
        assert!(sol.minus.iter().all(|c| c.norm() == 0.0));
        let (k, _) = sol.plus.iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).unwrap();
        assert!((sol.p()[k] - 1.0).abs() <= sol.axis().spacing);
    }

    #[test]
    fn two_wavelet_keeps_atoms() {
        let recs = read_all(&bytes("two-wavelet", 0)[..]).unwrap();
        assert_eq!(atoms_of(&recs).unwrap(), Some(two_wavelet(1).unwrap()));
    }

    #[test]
    fn unknown_demo() {
        assert!(matches!(generate_demo("nope", 0), Err(Error::Unknown { .. })));
    }
}
