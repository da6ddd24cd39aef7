use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::field::{FieldKind, TimeFreqField};
use crate::signal::fft::fft_batch;
use crate::signal::{GridSpec, SampledFunction};
use crate::{Error, Result, C64};

fn czero() -> C64 {
    C64::new(0.0, 0.0)
}

fn check_pair(u: &SampledFunction, v: &SampledFunction) -> Result<()> {
    if !u.grid.same_as(&v.grid) {
        return Err(Error::GridMismatch("Wigner arguments live on different grids".into()));
    }
    if u.grid.dim != 1 {
        return Err(Error::Unsupported("time-frequency transforms are implemented for d = 1".into()));
    }
    u.check_finite()?;
    v.check_finite()
}

/// How the half-sample values `u(x ± t/2)` are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WignerRoute {
    /// 2× zero-padded spectral interpolation, lag FFT per `x`.
    Upsampled,
    /// Pair sums `Σ_{k+l=r} û_k conj v̂_l` over exact spectra.
    Spectral,
    /// Pair sums `Σ_{a+b=c} u_a conj v_b` over the samples themselves.
    SamplePairs,
}

/// `Wig(u,v)(x,ξ) = ∫ u(x+t/2) conj v(x−t/2) e^{−iξt} dt` on the spatial grid
/// in `x` and a `ξ` grid of spacing `dξ/2` over `[−Ξ, Ξ)`.
///
/// Uses [`WignerRoute::Spectral`] when both arguments carry exact spectra and
/// [`WignerRoute::Upsampled`] otherwise; both compute the same periodic
/// discretization.
pub fn wigner(u: &SampledFunction, v: &SampledFunction) -> Result<TimeFreqField> {
    if u.has_exact_spectrum() && v.has_exact_spectrum() {
        wigner_with(u, v, WignerRoute::Spectral)
    } else {
        wigner_with(u, v, WignerRoute::Upsampled)
    }
}

pub fn wigner_with(u: &SampledFunction, v: &SampledFunction, route: WignerRoute) -> Result<TimeFreqField> {
    check_pair(u, v)?;
    match route {
        WignerRoute::Upsampled => {
            u.check_decay()?;
            v.check_decay()?;
            wigner_upsampled(u, v)
        }
        WignerRoute::Spectral => {
            let us = u.forward_ft()?.samples;
            let vs = v.forward_ft()?.samples;
            wigner_spectral(u.grid, &us, &vs)
        }
        WignerRoute::SamplePairs => wigner_sample_pairs(u, v),
    }
}

/// Output grids of the upsampled and spectral routes.
fn standard_grids(g: GridSpec) -> Result<(GridSpec, GridSpec)> {
    Ok((g, GridSpec::new(1, g.nyquist(), 2 * g.points)?))
}

/// Values on the half grid `−X + iΔ/2`, `i = 0..2N`, by zero-padded spectral interpolation.
pub fn upsample2(f: &SampledFunction) -> Result<Vec<C64>> {
    let n = f.grid.points;
    let spec = f.forward_ft()?.samples;
    let mut buf = vec![czero(); 2 * n];
    let half = (n / 2) as i64;
    for (idx, z) in spec.iter().enumerate() {
        let k = idx as i64 - half;
        let sign = if k.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
        let mut val = *z * sign;
        if k == -half {
            // split the Nyquist bin symmetrically between ±N/2
            val *= 0.5;
            buf[half as usize] += val;
        }
        buf[k.rem_euclid(2 * n as i64) as usize] += val;
    }
    fft_batch(&mut buf, 2 * n, true);
    let scale = f.grid.freq_spacing() / (2.0 * PI);
    buf.iter_mut().for_each(|z| *z *= scale);
    Ok(buf)
}

fn wigner_upsampled(u: &SampledFunction, v: &SampledFunction) -> Result<TimeFreqField> {
    let g = u.grid;
    let n = g.points;
    let m2 = 2 * n;
    let u2 = upsample2(u)?;
    let v2 = upsample2(v)?;
    let h = g.spacing();
    let rows: Vec<Vec<C64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut buf = vec![czero(); m2];
            for m in -(n as i64)..n as i64 {
                let a = (2 * j as i64 + m).rem_euclid(m2 as i64) as usize;
                let b = (2 * j as i64 - m).rem_euclid(m2 as i64) as usize;
                buf[m.rem_euclid(m2 as i64) as usize] = u2[a] * v2[b].conj();
            }
            fft_batch(&mut buf, m2, false);
            (0..m2).map(|q| buf[(q + n) % m2] * h).collect()
        })
        .collect();
    let (xg, kg) = standard_grids(g)?;
    TimeFreqField::new(xg, kg, rows.concat(), FieldKind::Wigner)
}

/// `W(x_j, r dξ/2) = (2dξ/2π) Σ_{k+l=r} U_k conj V_l e^{i x_j (k−l) dξ}`.
pub fn wigner_spectral(g: GridSpec, us: &[C64], vs: &[C64]) -> Result<TimeFreqField> {
    let n = g.points;
    let half = (n / 2) as i64;
    let dxi = g.freq_spacing();
    let scale = 2.0 * dxi / (2.0 * PI);
    let support = |s: &[C64]| -> Vec<i64> {
        s.iter().enumerate().filter(|(_, z)| z.re != 0.0 || z.im != 0.0).map(|(i, _)| i as i64 - half).collect()
    };
    let ku = support(us);
    let kv = support(vs);
    let cols: Vec<Vec<C64>> = (0..2 * n)
        .into_par_iter()
        .map(|q| {
            let r = q as i64 - n as i64;
            let mut b = vec![czero(); n];
            let mut any = false;
            for &k in &ku {
                let l = r - k;
                if l < -half || l >= half || kv.binary_search(&l).is_err() {
                    continue;
                }
                let s = k - l;
                let sign = if s.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
                b[s.rem_euclid(n as i64) as usize] += us[(k + half) as usize] * vs[(l + half) as usize].conj() * sign;
                any = true;
            }
            if !any {
                return b;
            }
            fft_batch(&mut b, n, true);
            b.iter_mut().for_each(|z| *z *= scale);
            b
        })
        .collect();
    let mut samples = vec![czero(); n * 2 * n];
    for (q, col) in cols.iter().enumerate() {
        for (j, z) in col.iter().enumerate() {
            samples[j * 2 * n + q] = *z;
        }
    }
    let (xg, kg) = standard_grids(g)?;
    TimeFreqField::new(xg, kg, samples, FieldKind::Wigner)
}

/// Pair sums over samples: `W(x_c, ξ) = 2Δ Σ_{a+b=c} u_a conj v_b e^{−iξ(a−b)Δ}` at the
/// half-grid centres `x_c = −X + cΔ/2` and `ξ` of spacing `dξ/2` over `[−Ξ/2, Ξ/2)`.
///
/// The samples are treated as compactly supported inside the window (no wrap),
/// so the `x`-support of the result is exactly the convex hull of the
/// sample support; this is the discrete counterpart of `(2π)^{-1} Wig f̂(ξ, −x)`.
fn wigner_sample_pairs(u: &SampledFunction, v: &SampledFunction) -> Result<TimeFreqField> {
    let g = u.grid;
    let n = g.points;
    let h = g.spacing();
    let us = u.samples();
    let vs = v.samples();
    let xg = GridSpec::new(1, g.half_width, 2 * n)?;
    let kg = GridSpec::new(1, g.nyquist() / 2.0, n)?;
    let xis = kg.coords();
    let rows: Vec<Vec<C64>> = (0..2 * n)
        .into_par_iter()
        .map(|c| {
            let lo = c.saturating_sub(n - 1);
            let hi = c.min(n - 1);
            let mut b = vec![czero(); n];
            let mut any = false;
            if lo <= hi {
                for bi in lo..=hi {
                    let a = c - bi;
                    let prod = us[a] * vs[bi].conj();
                    if prod.re != 0.0 || prod.im != 0.0 {
                        any = true;
                        b[bi] = if bi % 2 == 1 { -prod } else { prod };
                    }
                }
            }
            if !any {
                return vec![czero(); n];
            }
            fft_batch(&mut b, n, true);
            b.iter()
                .zip(&xis)
                .map(|(z, xi)| *z * Complex64::from_polar(2.0 * h, -xi * c as f64 * h))
                .collect()
        })
        .collect();
    TimeFreqField::new(xg, kg, rows.concat(), FieldKind::Wigner)
}
