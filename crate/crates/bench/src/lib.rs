//! Fixtures shared by the benchmarks.

use wrast::demo::{demo_grid, two_wavelet, wavepacket};
use wrast::wave::{default_p_axis, EuclideanPoint, WaveSolution};
use wrast::{Grid, SampledSignal};

/// The seeded band-limited demo signal on the 64² grid.
pub fn signal(seed: u64) -> SampledSignal {
    let rec = wrast::demo::generate_demo("bandlimited2d", seed).expect("demo").remove(0);
    SampledSignal::new(rec.grid, rec.values).expect("signal")
}

pub fn grid() -> Grid {
    demo_grid().expect("grid")
}

/// The plus-only wave packet demo.
pub fn packet() -> WaveSolution {
    wavepacket().expect("packet")
}

/// The two-wavelet demo sampled on a frequency axis of `count` nodes.
pub fn two_wavelets(count: usize) -> WaveSolution {
    let axis = default_p_axis(8.0, 16.0 / count as f64).expect("axis");
    let atoms = two_wavelet(1).expect("atoms");
    atoms.to_solution(&Grid::from_axis(axis)).expect("solution")
}

/// `n × n` points of the upper half plane around the origin.
pub fn plane_points(n: usize) -> Vec<EuclideanPoint> {
    (0..n * n)
        .map(|k| {
            let (i, j) = (k % n, k / n);
            EuclideanPoint::new(-3.0 + 6.0 * i as f64 / n as f64, 0.1 + 2.0 * j as f64 / n as f64)
        })
        .collect()
}
