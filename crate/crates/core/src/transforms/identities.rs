//! The cross-identities between the transforms, evaluated as relative errors.
//!
//! The discrete Wigner and ambiguity transforms are periodic in the centre
//! variable with period `X` (half the window), so every comparison that
//! involves them is restricted to the central region `|x| < X/2`; inputs are
//! expected to be concentrated in `|x| < X/4` there.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::ambiguity::ambiguity;
#[cfg(test)]
use super::wigner::wigner_with;
use super::field::TimeFreqField;
use super::ops::reflect;
use super::stft::stft;
use super::wigner::wigner;
use crate::signal::{GridSpec, SampledFunction, Spectrum};
use crate::{Error, Result, C64};

fn require_1d(f: &SampledFunction) -> Result<()> {
    if f.grid.dim != 1 {
        return Err(Error::Unsupported("transform identities are implemented for d = 1".into()));
    }
    Ok(())
}

fn central(g: &GridSpec, j: usize) -> bool {
    g.coord(j).abs() < 0.5 * g.half_width
}

/// Largest `|a − b|` over the pairs, relative to the largest `|b|`.
fn max_rel(pairs: impl Iterator<Item = (C64, C64)>) -> f64 {
    let (mut err, mut scale) = (0.0f64, 0.0f64);
    for (a, b) in pairs {
        err = err.max((a - b).norm());
        scale = scale.max(b.norm());
    }
    if scale == 0.0 {
        err
    } else {
        err / scale
    }
}

/// `|‖f̂‖² − (2π)^d ‖f‖²| / ((2π)^d ‖f‖²)`.
pub fn plancherel_error(f: &SampledFunction) -> Result<f64> {
    let lhs = f.forward_ft()?.l2_norm_sq();
    let rhs = (2.0 * PI).powi(f.grid.dim as i32) * f.l2_norm_sq();
    Ok(if rhs == 0.0 { lhs } else { (lhs - rhs).abs() / rhs })
}

/// The samples of `f̂` read as a function on the frequency grid.
pub fn spectrum_as_function(s: &Spectrum) -> SampledFunction {
    SampledFunction::from_parts(s.grid, s.samples.clone(), None)
}

/// Errors of `∫ Wig f dξ = 2π|f|²` and `∫ Wig f dx = |f̂|²`, both relative to the
/// peak of the right-hand side. The `x` integral runs over the central region
/// and is compared on the spectrum grid.
pub fn wigner_marginal_errors(f: &SampledFunction) -> Result<(f64, f64)> {
    require_1d(f)?;
    let w = wigner(f, f)?;
    let g = f.grid;
    let dk = w.xi_grid.spacing();
    let xi_marg = (0..w.nx()).map(|j| {
        let s: C64 = (0..w.nxi()).map(|q| w.get(j, q)).sum::<C64>() * dk;
        (s, Complex64::new(2.0 * PI * f.samples()[j].norm_sqr(), 0.0))
    });
    let e_xi = max_rel(xi_marg);
    let spec = f.forward_ft()?;
    let h = g.spacing();
    let x_marg = (0..g.points).map(|k| {
        let s: C64 = (0..w.nx()).filter(|&j| central(&g, j)).map(|j| w.get(j, 2 * k)).sum::<C64>() * h;
        (s, Complex64::new(spec.samples[k].norm_sqr(), 0.0))
    });
    Ok((e_xi, max_rel(x_marg)))
}

/// `|‖Wig f‖² − 2π‖f‖⁴| / (2π‖f‖⁴)` with the field norm over the central region.
pub fn moyal_error(f: &SampledFunction) -> Result<f64> {
    require_1d(f)?;
    let w = wigner(f, f)?;
    let cell = w.x_grid.spacing() * w.xi_grid.spacing();
    let lhs: f64 = (0..w.nx())
        .filter(|&j| central(&w.x_grid, j))
        .map(|j| (0..w.nxi()).map(|q| w.get(j, q).norm_sqr()).sum::<f64>())
        .sum::<f64>()
        * cell;
    let rhs = 2.0 * PI * f.l2_norm_sq().powi(2);
    Ok((lhs - rhs).abs() / rhs)
}

/// `V_ψu(x,ξ) = (2π)^{-1} e^{−ixξ} V_{ψ̂}û(ξ,−x)`, compared for `|x| < X/2`, `|ξ| < Ξ/2`.
pub fn stft_fundamental_error(u: &SampledFunction, psi: &SampledFunction) -> Result<f64> {
    require_1d(u)?;
    let lhs = stft(u, psi)?;
    let uh = spectrum_as_function(&u.forward_ft()?);
    let ph = spectrum_as_function(&psi.forward_ft()?);
    let rhs = stft(&uh, &ph)?;
    let g = u.grid;
    let fg = g.frequency_grid();
    let n = g.points;
    let pairs = (0..n).filter(|&j| central(&g, j)).flat_map(|j| {
        let x = g.coord(j);
        let lhs = &lhs;
        let rhs = &rhs;
        (0..n).filter(move |&k| central(&fg, k)).map(move |k| {
            let xi = fg.coord(k);
            let r = rhs.get(k, (n - j) % n) * Complex64::from_polar(1.0 / (2.0 * PI), -x * xi);
            (lhs.get(j, k), r)
        })
    });
    Ok(max_rel(pairs))
}

/// `Wig f(x,ξ) = 2 e^{2ixξ} V_{f̃}f(2x, 2ξ)` wherever `(2x, 2ξ)` is a grid point
/// with `|x| < X/2`, `|2ξ| < Ξ`.
pub fn wigner_stft_error(f: &SampledFunction) -> Result<f64> {
    require_1d(f)?;
    let w = wigner(f, f)?;
    let v = stft(f, &reflect(f))?;
    let g = f.grid;
    let n = g.points;
    let pairs = (n / 4..3 * n / 4).flat_map(|j| {
        let x = g.coord(j);
        let w = &w;
        let v = &v;
        (n / 2..3 * n / 2).map(move |q| {
            let xi = w.xi_grid.coord(q);
            let r = v.get(2 * j - n / 2, q - n / 2) * Complex64::from_polar(2.0, 2.0 * x * xi);
            (w.get(j, q), r)
        })
    });
    Ok(max_rel(pairs))
}

/// `Wig f̂(ξ, x) = 2π Wig f(−x, ξ)` on common grid points of the central regions.
pub fn wigner_fourier_error(f: &SampledFunction) -> Result<f64> {
    require_1d(f)?;
    let w = wigner(f, f)?;
    let fh = spectrum_as_function(&f.forward_ft()?);
    let wh = wigner(&fh, &fh)?;
    let g = f.grid;
    let fg = g.frequency_grid();
    let n = g.points;
    let pairs = (0..n).filter(|&k| central(&fg, k)).flat_map(|k| {
        let w = &w;
        let wh = &wh;
        (0..n).filter(|&j| central(&g, j)).map(move |j| {
            // −x_j on the half grid of the dual variable: index (2N − 2j) mod 2N
            let i = (2 * n - 2 * j) % (2 * n);
            (wh.get(k, i), w.get(j, 2 * k) * (2.0 * PI))
        })
    });
    Ok(max_rel(pairs))
}

/// `Af(x, ξ) = e^{ixξ/2} V_f f(x, ξ)` for `|x| < X/2`.
pub fn ambiguity_stft_error(f: &SampledFunction) -> Result<f64> {
    require_1d(f)?;
    let a = ambiguity(f)?;
    let v = stft(f, f)?;
    let g = f.grid;
    let fg = g.frequency_grid();
    let n = g.points;
    let pairs = (0..n).filter(|&j| central(&g, j)).flat_map(|j| {
        let (a, v) = (&a, &v);
        (0..n).map(move |k| {
            let ph = Complex64::from_polar(1.0, 0.5 * g.coord(j) * fg.coord(k));
            (a.get(j, k), v.get(j, k) * ph)
        })
    });
    Ok(max_rel(pairs))
}

/// Largest deviation of a Wigner field from a closed form over the central region,
/// relative to the closed form's peak.
pub fn field_error_vs<F: Fn(f64, f64) -> C64>(w: &TimeFreqField, exact: F) -> f64 {
    let pairs = (0..w.nx()).filter(|&j| central(&w.x_grid, j)).flat_map(|j| {
        let x = w.x_grid.coord(j);
        let exact = &exact;
        (0..w.nxi()).map(move |q| (w.get(j, q), exact(x, w.xi_grid.coord(q))))
    });
    max_rel(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::new(1, 16.0, 256).unwrap()
    }

    fn e0(g: GridSpec) -> SampledFunction {
        SampledFunction::from_real_fn(g, |x| PI.powf(-0.25) * (-x[0] * x[0] / 2.0).exp())
    }

    fn chirped(g: GridSpec) -> SampledFunction {
        SampledFunction::from_fn(g, |x| {
            let t = x[0] - 0.75;
            Complex64::from_polar((-t * t / 1.5).exp(), 0.8 * x[0] + 0.1 * t * t)
        })
    }

    #[test]
    fn gaussian_wigner_closed_form() {
        let f = e0(grid());
        let w = wigner(&f, &f).unwrap();
        let err = field_error_vs(&w, |x, xi| Complex64::new(2.0 * (-x * x - xi * xi).exp(), 0.0));
        assert!(err * 2.0 < 1e-6, "{err}");
        assert!(w.relative_imaginary() < 1e-10);
    }

    #[test]
    fn gaussian_stft_closed_form() {
        let f = e0(grid());
        let v = stft(&f, &f).unwrap();
        let mut err: f64 = 0.0;
        for j in 0..v.nx() {
            for k in 0..v.nxi() {
                let (x, xi) = (v.x_grid.coord(j), v.xi_grid.coord(k));
                let e = Complex64::from_polar((-x * x / 4.0 - xi * xi / 4.0).exp(), -x * xi / 2.0);
                err = err.max((v.get(j, k) - e).norm());
            }
        }
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn gaussian_ambiguity_closed_form() {
        let f = e0(grid());
        let a = ambiguity(&f).unwrap();
        let mut err: f64 = 0.0;
        for j in 0..a.nx() {
            for k in 0..a.nxi() {
                let (x, xi) = (a.x_grid.coord(j), a.xi_grid.coord(k));
                err = err.max((a.get(j, k) - (-(x * x + xi * xi) / 4.0).exp()).norm());
            }
        }
        assert!(err < 1e-10, "{err}");
        assert!((a.value_at(0.0, 0.0).unwrap().re - f.l2_norm_sq()).abs() < 1e-12);
    }

    #[test]
    fn identities_on_gaussians() {
        for f in [e0(grid()), chirped(grid())] {
            assert!(plancherel_error(&f).unwrap() < 1e-12);
            let (a, b) = wigner_marginal_errors(&f).unwrap();
            assert!(a < 1e-10 && b < 1e-8, "{a} {b}");
            assert!(moyal_error(&f).unwrap() < 1e-8);
            let g = SampledFunction::from_real_fn(f.grid, |x| (-(x[0] + 1.0).powi(2)).exp());
            assert!(stft_fundamental_error(&f, &g).unwrap() < 1e-10);
            assert!(wigner_stft_error(&f).unwrap() < 1e-10);
            assert!(wigner_fourier_error(&f).unwrap() < 1e-10);
            assert!(ambiguity_stft_error(&f).unwrap() < 1e-10);
        }
    }

    #[test]
    fn spectral_and_upsampled_routes_agree() {
        let f = chirped(grid());
        let spec = f.forward_ft().unwrap();
        let exact = spec.inverse_ft();
        let a = wigner_with(&exact, &exact, super::super::WignerRoute::Spectral).unwrap();
        let b = wigner_with(&f, &f, super::super::WignerRoute::Upsampled).unwrap();
        let err = max_rel(a.samples.iter().copied().zip(b.samples.iter().copied()));
        assert!(err < 1e-12, "{err}");
    }
}
