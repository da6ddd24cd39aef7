//! Grid functions on `R^d` (`d ∈ {1, 2}`), the Fourier transform in the
//! convention `f̂(ξ) = ∫ f(x) e^{-i⟨x,ξ⟩} dx`, spectral differentiation, and
//! log-domain weighted norms.

pub(crate) mod fft;
mod function;
mod grid;
pub mod norms;
pub mod profile;

pub use function::{SampledFunction, Spectrum, SupportExtent, DECAY_GUARD, SATURATION_GUARD, SPECTRAL_DECAY, SUPPORT_TAU};
pub use grid::GridSpec;
pub use norms::{mixed_lpq_norm, weighted_lp_norm, weighted_lp_norm_with, XWeight, XiWeight};
pub use profile::{seminorm_profile, DiagnosticTable, SeminormCondition};

/// All multi-indices of total order `n` in `dim` variables, lexicographic.
pub fn multi_indices(dim: usize, n: u32) -> Vec<Vec<u32>> {
    if dim == 1 {
        vec![vec![n]]
    } else {
        (0..=n).rev().map(|a| vec![a, n - a]).collect()
    }
}
