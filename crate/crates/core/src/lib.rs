//! Numerical laboratory for real Paley-Wiener theorems.
//!
//! Given a smooth, rapidly decaying function `f` sampled on a uniform grid, the
//! crate recovers the sup-norm radius of the support of its Fourier transform
//! from the growth of
//!
//! * weighted derivative norms `‖e^{λω(x/(n+1))} D^α f‖_p`,
//! * Wigner moments `‖|ξ|^N Wig f‖_{L^{p,q}}` and `‖|x|^N Wig f‖_{L^{p,q}}`,
//! * Gabor moments `‖|ξ|^N V_ψ f‖_{L^{p,q}}`,
//! * iterates `P(D)^n f` of constant coefficient operators,
//!
//! and compares every estimate with a direct support oracle on the FFT grid.
//!
//! Fourier convention: `f̂(ξ) = ∫ f(x) e^{-i⟨x,ξ⟩} dx`, inverse with `(2π)^{-d}`,
//! and `D_j = -i ∂_j`.

pub mod corpus;
pub mod error;
pub mod estimators;
pub mod experiments;
pub mod io;
pub mod numeric;
pub mod polyops;
pub mod report;
pub mod signal;
pub mod transforms;
pub mod weights;

pub use error::{Error, Result};
pub use numeric::LogMagnitude;
pub use signal::{GridSpec, SampledFunction, Spectrum};
pub use weights::WeightFunction;

/// Complex sample type used throughout.
pub type C64 = num_complex::Complex64;
