use rayon::prelude::*;

use super::field::{FieldKind, TimeFreqField};
use crate::signal::fft::{checkerboard, fft_batch};
use crate::signal::{SampledFunction, Spectrum};
use crate::{Error, Result, C64};

fn same_grid(u: &SampledFunction, v: &SampledFunction) -> Result<()> {
    if !u.grid.same_as(&v.grid) {
        return Err(Error::GridMismatch("transform arguments live on different grids".into()));
    }
    if u.grid.dim != 1 {
        return Err(Error::Unsupported("time-frequency transforms are implemented for d = 1".into()));
    }
    Ok(())
}

/// `V_ψ u(x, ξ) = ∫ u(y) conj ψ(y − x) e^{−iyξ} dy` on the spatial × spectrum grid.
///
/// Arguments that both carry exact spectra are evaluated from the spectra,
/// `V_ψ u(x,ξ) = (2π)^{-1} ∫ û(η) conj ψ̂(η − ξ) e^{i x (η − ξ)} dη`, which is the
/// same discrete quantity but keeps exact zeros outside the joint support.
pub fn stft(u: &SampledFunction, psi: &SampledFunction) -> Result<TimeFreqField> {
    same_grid(u, psi)?;
    u.check_finite()?;
    psi.check_finite()?;
    match (u.exact_spectrum(), psi.exact_spectrum()) {
        (Some(us), Some(ps)) => stft_spectral(u, us, ps),
        _ => stft_time(u, psi),
    }
}

/// Direct evaluation: one forward DFT per shift `x_j` with circular shifting.
pub fn stft_time(u: &SampledFunction, psi: &SampledFunction) -> Result<TimeFreqField> {
    same_grid(u, psi)?;
    u.check_decay()?;
    psi.check_decay()?;
    let g = u.grid;
    let n = g.points;
    let h = g.spacing();
    let us = u.samples();
    let ps = psi.samples();
    let rows: Vec<Vec<C64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut buf: Vec<C64> = (0..n).map(|l| us[l] * ps[(l + n + n / 2 - j) % n].conj()).collect();
            checkerboard(&mut buf, n, 1);
            fft_batch(&mut buf, n, false);
            checkerboard(&mut buf, n, 1);
            buf.iter_mut().for_each(|z| *z *= h);
            buf
        })
        .collect();
    TimeFreqField::new(g, g.frequency_grid(), rows.concat(), FieldKind::Stft)
}

fn stft_spectral(u: &SampledFunction, us: &[C64], ps: &[C64]) -> Result<TimeFreqField> {
    let g = u.grid;
    let n = g.points;
    let fg = g.frequency_grid();
    let cols: Vec<Vec<C64>> = (0..n)
        .into_par_iter()
        .map(|m| {
            // ξ_m = −Ξ + m dξ; the product spectrum at η = ξ_k' is û(ξ_k' + ξ_m) conj ψ̂(ξ_k')
            let prod: Vec<C64> = (0..n).map(|k| us[(k + m + n / 2) % n] * ps[k].conj()).collect();
            if prod.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
                return vec![C64::new(0.0, 0.0); n];
            }
            Spectrum::new_unchecked(fg, prod, g.cell()).inverse_ft().into_samples()
        })
        .collect();
    let mut samples = vec![C64::new(0.0, 0.0); n * n];
    for (m, col) in cols.iter().enumerate() {
        for (j, z) in col.iter().enumerate() {
            samples[j * n + m] = *z;
        }
    }
    TimeFreqField::new(g, fg, samples, FieldKind::Stft)
}
