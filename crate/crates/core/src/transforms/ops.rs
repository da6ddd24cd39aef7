//! Exact grid symmetries: reflection, on-grid translation, modulation.

use num_complex::Complex64;

use crate::signal::{SampledFunction, Spectrum};
use crate::{Error, Result, C64};

fn permute<F: Fn(usize) -> usize>(v: &[C64], n: usize, dim: usize, map: F) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    if dim == 1 {
        for j in 0..n {
            out[map(j)] = v[j];
        }
    } else {
        for a in 0..n {
            for b in 0..n {
                out[map(a) * n + map(b)] = v[a * n + b];
            }
        }
    }
    out
}

/// `f̃(x) = f(−x)`.
pub fn reflect(f: &SampledFunction) -> SampledFunction {
    let n = f.grid.points;
    let dim = f.grid.dim;
    let flip = |j: usize| (n - j) % n;
    let samples = permute(f.samples(), n, dim, flip);
    let spectrum = f.exact_spectrum().map(|s| permute(s, n, dim, flip));
    SampledFunction::from_parts(f.grid, samples, spectrum)
}

fn integral_shift(shift: f64, spacing: f64) -> Result<i64> {
    let t = shift / spacing;
    let r = t.round();
    if (t - r).abs() > 1e-9 * (1.0 + t.abs()) {
        return Err(Error::Parameter(format!("shift {shift} is not a multiple of the spacing {spacing}")));
    }
    Ok(r as i64)
}

fn shift_indices(v: &[C64], n: usize, dim: usize, s: &[i64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    let nn = n as i64;
    let mv = |j: usize, k: i64| ((j as i64 + k).rem_euclid(nn)) as usize;
    if dim == 1 {
        for j in 0..n {
            out[mv(j, s[0])] = v[j];
        }
    } else {
        for a in 0..n {
            for b in 0..n {
                out[mv(a, s[0]) * n + mv(b, s[1])] = v[a * n + b];
            }
        }
    }
    out
}

/// `T_{x0} f(x) = f(x − x0)` for on-grid `x0`.
pub fn translate(f: &SampledFunction, x0: &[f64]) -> Result<SampledFunction> {
    let g = f.grid;
    if x0.len() != g.dim {
        return Err(Error::Parameter("shift dimension differs from grid".into()));
    }
    let s = x0.iter().map(|&c| integral_shift(c, g.spacing())).collect::<Result<Vec<_>>>()?;
    let samples = shift_indices(f.samples(), g.points, g.dim, &s);
    let spectrum = f.exact_spectrum().map(|spec| {
        let fg = g.frequency_grid();
        spec.iter()
            .enumerate()
            .map(|(i, &z)| {
                let p = fg.point(i);
                let phase: f64 = (0..g.dim).map(|ax| -x0[ax] * p[ax]).sum();
                z * Complex64::from_polar(1.0, phase)
            })
            .collect()
    });
    Ok(SampledFunction::from_parts(g, samples, spectrum))
}

/// Translation of spectrum samples by an on-grid frequency offset.
pub fn translate_spectrum(f: &Spectrum, xi0: &[f64]) -> Result<Spectrum> {
    let g = f.grid;
    let s = xi0.iter().map(|&c| integral_shift(c, g.spacing())).collect::<Result<Vec<_>>>()?;
    Ok(Spectrum::new_unchecked(g, shift_indices(&f.samples, g.points, g.dim, &s), f.convention_factor))
}

/// `M_{ξ0} f(x) = e^{i⟨ξ0,x⟩} f(x)`; an on-grid `ξ0` keeps the exact spectrum.
pub fn modulate(f: &SampledFunction, xi0: &[f64]) -> Result<SampledFunction> {
    let g = f.grid;
    if xi0.len() != g.dim {
        return Err(Error::Parameter("modulation dimension differs from grid".into()));
    }
    let out = f.map_points(|x, z| {
        let phase: f64 = x.iter().zip(xi0).map(|(a, b)| a * b).sum();
        z * Complex64::from_polar(1.0, phase)
    });
    match (f.exact_spectrum(), xi0.iter().map(|&c| integral_shift(c, g.freq_spacing())).collect::<Result<Vec<_>>>()) {
        (Some(spec), Ok(s)) => out.with_exact_spectrum(shift_indices(spec, g.points, g.dim, &s)),
        _ => Ok(out),
    }
}
