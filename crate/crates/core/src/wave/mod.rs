//! Solutions of the 1+1D wave equation `∂²f/∂t² = ∂²f/∂x²` stored as
//! light-cone spectra: `f(x, t) = ∫ e^{2πipu} f̂₊(p) dp + ∫ e^{2πipv} f̂₋(p) dp`
//! with `u = x + t`, `v = x − t`, and the Sobolev inner product
//! `⟨⟨f, g⟩⟩_s = ∫ |p|^{−s} (f̂₊* ĝ₊ + f̂₋* ĝ₋) dp`.

pub mod euclid;
pub mod sl2;
pub mod solution;
pub mod symmetry;
pub mod wavelet;

pub use euclid::{
    ast_on_axis, boundary_values, dual_x_axis, euclidean_ast, harmonic_residual, n_s, norm_via_theorem5, phase_space,
    resolution_identity_check, boundary_norms, BoundaryValues, EuclideanPoint, PhaseSpaceRow, ResolutionIdentity,
    BoundaryNorms, PseudoLocalNorm, XtDesign, WAVE_EPS_SCHEDULE,
};
pub use sl2::{mobius, sl2_action, sl2_decompose, transform_atoms, MobiusImage, SampledAction, Sl2Coset, Sl2Element, Sl2Transformed};
pub use solution::{
    default_p_axis, evaluate_spacetime, frequency_components, random_solution, weight_shift, FrequencyComponents,
    WaveSolution,
};
pub use symmetry::{apply, apply_symmetry, kappa_of, Symmetry};
pub use wavelet::{
    color_stats, consistency_check, ez_norm_sq, ez_spacetime, gram_matrix, min_eigenvalue, mother_wavelet,
    mother_wavelet_l2, nearest_nodes, plane_norm_sq, plus_kernel, reproducing_kernel, wavelet_ez, AstFunction, Atom,
    AtomKind, AtomSolution, ColorStats, PlaneDesign,
};
