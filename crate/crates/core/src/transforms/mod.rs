//! Gabor (short-time Fourier), Wigner and ambiguity transforms on `d = 1` grids,
//! exact grid symmetries, and the identities linking them.

mod ambiguity;
mod field;
pub mod identities;
mod ops;
mod stft;
mod wigner;

pub use ambiguity::ambiguity;
pub use field::{grid_index, FieldKind, TimeFreqField};
pub use ops::{modulate, reflect, translate, translate_spectrum};
pub use stft::{stft, stft_time};
pub use wigner::{upsample2, wigner, wigner_spectral, wigner_with, WignerRoute};
