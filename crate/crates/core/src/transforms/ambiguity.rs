use num_complex::Complex64;
use rayon::prelude::*;

use super::field::{FieldKind, TimeFreqField};
use super::wigner::upsample2;
use crate::signal::fft::fft_batch;
use crate::signal::SampledFunction;
use crate::{Error, Result, C64};

/// `Af(x, ξ) = ∫ f(t + x/2) conj f(t − x/2) e^{−itξ} dt` with the lag `x` on the
/// spatial grid and `ξ` on the spectrum grid; the centre `t` runs over the
/// half-sample grid obtained by spectral interpolation.
pub fn ambiguity(f: &SampledFunction) -> Result<TimeFreqField> {
    if f.grid.dim != 1 {
        return Err(Error::Unsupported("time-frequency transforms are implemented for d = 1".into()));
    }
    f.check_finite()?;
    if !f.has_exact_spectrum() {
        f.check_decay()?;
    }
    let g = f.grid;
    let n = g.points;
    let m2 = 2 * n;
    let u2 = upsample2(f)?;
    let half_cell = g.spacing() / 2.0;
    let quarter = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, -1.0)];
    let rows: Vec<Vec<C64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            // t_i = −X + iΔ/2, so t ± x_j/2 sit at half-grid indices i + j − N/2 and i − j + N/2
            let mut buf: Vec<C64> = (0..m2)
                .map(|i| {
                    let a = (i + j + m2 - n / 2) % m2;
                    let b = (i + m2 + n / 2 - j) % m2;
                    u2[a] * u2[b].conj() * quarter[i % 4]
                })
                .collect();
            fft_batch(&mut buf, m2, false);
            (0..n).map(|k| if k % 2 == 1 { -buf[k] * half_cell } else { buf[k] * half_cell }).collect()
        })
        .collect();
    TimeFreqField::new(g, g.frequency_grid(), rows.concat(), FieldKind::Ambiguity)
}
