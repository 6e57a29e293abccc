//! Two-anyon spectrum in the anisotropic trap.

pub mod assembly;
pub mod cache;
pub mod lanczos;
pub mod shift_invert;
pub mod sparse;
pub mod spectrum;

pub use assembly::{assemble_relative, RelativeProblem};
pub use cache::{assemble_cached, CACHE_ENV};
pub use lanczos::{lanczos_smallest, lanczos_with, LanczosOptions, SpectralResult};
pub use shift_invert::{shift_invert_smallest, BandedCholesky};
pub use sparse::{AssemblyMeta, SparseSymmetric, SymmetricOperator};
pub use spectrum::{
    cm_level, two_anyon_spectrum, SolverKind, SpectrumOptions, TruncationPolicy, TwoAnyonLevel,
    TwoAnyonSpectrum,
};
