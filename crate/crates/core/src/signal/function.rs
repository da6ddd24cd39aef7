use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::fft::{checkerboard, dft};
use super::grid::GridSpec;
use crate::{Error, Result, C64};

/// Relative level of the periodization guard on the outer 5% shell.
pub const DECAY_GUARD: f64 = 1e-10;
/// Relative level below which a spectrum counts as decayed before Nyquist.
pub const SPECTRAL_DECAY: f64 = 1e-12;
/// Relative level of the Nyquist-saturation guard.
pub const SATURATION_GUARD: f64 = 1e-8;

/// Complex samples of `f` on `[−X, X)^d`, row-major for `d = 2`.
///
/// Functions synthesized from a spectrum keep that spectrum: they are exact
/// trigonometric polynomials on the periodic grid, so `forward_ft` returns
/// the stored samples instead of a rounded DFT and the periodization guard
/// does not apply.
#[derive(Clone, Debug)]
pub struct SampledFunction {
    pub grid: GridSpec,
    samples: Vec<C64>,
    exact_spectrum: Option<Arc<Vec<C64>>>,
}

/// Samples of `f̂(ξ) = ∫ f(x) e^{−i⟨x,ξ⟩} dx` on the frequency grid.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub grid: GridSpec,
    pub samples: Vec<C64>,
    /// `Δ^d` of the spatial grid, the Riemann cell of the discretized integral.
    pub convention_factor: f64,
}

/// Sup-norm radius and per-axis extent of a thresholded spectral support.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportExtent {
    pub radius: f64,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

impl SampledFunction {
    pub fn new(grid: GridSpec, samples: Vec<C64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::GridMismatch(format!("{} samples for a grid of {}", samples.len(), grid.len())));
        }
        Ok(SampledFunction { grid, samples, exact_spectrum: None })
    }

    pub fn from_fn<F: Fn(&[f64]) -> C64>(grid: GridSpec, f: F) -> Self {
        let samples = (0..grid.len())
            .map(|i| {
                let p = grid.point(i);
                f(&p[..grid.dim])
            })
            .collect();
        SampledFunction { grid, samples, exact_spectrum: None }
    }

    pub fn from_real_fn<F: Fn(&[f64]) -> f64>(grid: GridSpec, f: F) -> Self {
        Self::from_fn(grid, |x| C64::new(f(x), 0.0))
    }

    pub fn zeros(grid: GridSpec) -> Self {
        SampledFunction { grid, samples: vec![zero(); grid.len()], exact_spectrum: None }
    }

    /// Attaches closed-form spectrum samples (on `grid.frequency_grid()`).
    pub fn with_exact_spectrum(mut self, spectrum: Vec<C64>) -> Result<Self> {
        if spectrum.len() != self.grid.len() {
            return Err(Error::GridMismatch("spectrum length differs from grid".into()));
        }
        self.exact_spectrum = Some(Arc::new(spectrum));
        Ok(self)
    }

    pub fn has_exact_spectrum(&self) -> bool {
        self.exact_spectrum.is_some()
    }

    pub fn exact_spectrum(&self) -> Option<&[C64]> {
        self.exact_spectrum.as_deref().map(|v| v.as_slice())
    }

    /// Drops the stored spectrum so that transforms go through the DFT.
    pub fn without_exact_spectrum(mut self) -> Self {
        self.exact_spectrum = None;
        self
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|z| *z == zero())
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Data("non-finite samples".into()));
        }
        Ok(())
    }

    /// Periodization guard: outer 5% shell maximum against the global maximum.
    pub fn check_decay(&self) -> Result<()> {
        if self.exact_spectrum.is_some() {
            return Ok(());
        }
        let (shell_max, global_max) = shell_and_global(&self.grid, &self.samples);
        if shell_max > DECAY_GUARD * global_max {
            return Err(Error::Periodization { shell_max, global_max });
        }
        Ok(())
    }

    /// `f̂` on the frequency grid; guarded against periodization error.
    pub fn forward_ft(&self) -> Result<Spectrum> {
        self.check_finite()?;
        if let Some(s) = &self.exact_spectrum {
            return Ok(Spectrum::new_unchecked(self.grid.frequency_grid(), s.as_ref().clone(), self.grid.cell()));
        }
        self.check_decay()?;
        Ok(self.dft_spectrum())
    }

    /// Phase-corrected DFT without guard or stored spectrum.
    pub fn dft_spectrum(&self) -> Spectrum {
        let n = self.grid.points;
        let mut buf = self.samples.clone();
        checkerboard(&mut buf, n, self.grid.dim);
        dft(&mut buf, n, self.grid.dim, false);
        checkerboard(&mut buf, n, self.grid.dim);
        let cell = self.grid.cell();
        buf.iter_mut().for_each(|z| *z *= cell);
        Spectrum::new_unchecked(self.grid.frequency_grid(), buf, cell)
    }

    /// `Σ |f|² Δ^d`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.cell()
    }

    /// `D^α f = F^{-1}[ξ^α f̂]`.
    pub fn spectral_derivative(&self, alpha: &[u32]) -> Result<SampledFunction> {
        if alpha.len() != self.grid.dim {
            return Err(Error::Parameter(format!("multi-index of length {} at d = {}", alpha.len(), self.grid.dim)));
        }
        if alpha.iter().all(|&a| a == 0) {
            return Ok(self.clone());
        }
        let spec = self.forward_ft()?;
        spec.check_spectral_decay()?;
        let fg = spec.grid;
        let mut out = spec.samples;
        for (idx, z) in out.iter_mut().enumerate() {
            let p = fg.point(idx);
            let mut m = 1.0;
            for (ax, &a) in alpha.iter().enumerate() {
                m *= p[ax].powi(a as i32);
            }
            *z *= m;
        }
        check_saturation(&fg, &out)?;
        let mut d = Spectrum::new_unchecked(fg, out, spec.convention_factor).inverse_ft();
        if self.exact_spectrum.is_none() {
            d.exact_spectrum = None;
        }
        Ok(d)
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<C64> {
        self.samples
    }

    /// Pointwise map; the stored spectrum (if any) is dropped.
    pub fn map_samples<F: Fn(C64) -> C64>(&self, f: F) -> SampledFunction {
        SampledFunction { grid: self.grid, samples: self.samples.iter().map(|&z| f(z)).collect(), exact_spectrum: None }
    }

    /// Pointwise map with access to the grid point; the stored spectrum is dropped.
    pub fn map_points<F: Fn(&[f64], C64) -> C64>(&self, f: F) -> SampledFunction {
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(i, &z)| {
                let p = self.grid.point(i);
                f(&p[..self.grid.dim], z)
            })
            .collect();
        SampledFunction { grid: self.grid, samples, exact_spectrum: None }
    }

    pub(crate) fn from_parts(grid: GridSpec, samples: Vec<C64>, exact: Option<Vec<C64>>) -> Self {
        SampledFunction { grid, samples, exact_spectrum: exact.map(Arc::new) }
    }
}

impl Spectrum {
    pub fn new(grid: GridSpec, samples: Vec<C64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::GridMismatch(format!("{} samples for a grid of {}", samples.len(), grid.len())));
        }
        let cell = grid.frequency_grid().cell();
        Ok(Spectrum { grid, samples, convention_factor: cell })
    }

    pub(crate) fn new_unchecked(grid: GridSpec, samples: Vec<C64>, convention_factor: f64) -> Self {
        Spectrum { grid, samples, convention_factor }
    }

    pub fn from_real_fn<F: Fn(&[f64]) -> f64>(grid: GridSpec, f: F) -> Self {
        let samples = (0..grid.len())
            .map(|i| {
                let p = grid.point(i);
                C64::new(f(&p[..grid.dim]), 0.0)
            })
            .collect();
        let cell = grid.frequency_grid().cell();
        Spectrum { grid, samples, convention_factor: cell }
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `f` on the spatial grid; the result keeps this spectrum as its exact transform.
    pub fn inverse_ft(&self) -> SampledFunction {
        let n = self.grid.points;
        let dim = self.grid.dim;
        let mut buf = self.samples.clone();
        checkerboard(&mut buf, n, dim);
        dft(&mut buf, n, dim, true);
        checkerboard(&mut buf, n, dim);
        let scale = (self.grid.spacing() / (2.0 * PI)).powi(dim as i32);
        buf.iter_mut().for_each(|z| *z *= scale);
        SampledFunction::from_parts(self.grid.frequency_grid(), buf, Some(self.samples.clone()))
    }

    /// `Σ |f̂|² dξ^d`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.cell()
    }

    /// Outer-shell maximum of the spectrum at most `1e-12` of its peak.
    pub fn check_spectral_decay(&self) -> Result<()> {
        let (edge, peak) = shell_and_global(&self.grid, &self.samples);
        if edge > SPECTRAL_DECAY * peak {
            return Err(Error::SpectralDecay { edge, peak });
        }
        Ok(())
    }

    /// Per-axis extent of `{ξ : |F(ξ)| ≥ τ max|F|}`; all zeros for `F ≡ 0`.
    pub fn support_extent(&self, tau: f64) -> SupportExtent {
        let peak = self.max_abs();
        let dim = self.grid.dim;
        if peak == 0.0 {
            return SupportExtent { radius: 0.0, lower: vec![0.0; dim], upper: vec![0.0; dim] };
        }
        let mut lower = vec![f64::INFINITY; dim];
        let mut upper = vec![f64::NEG_INFINITY; dim];
        let mut radius: f64 = 0.0;
        for (idx, z) in self.samples.iter().enumerate() {
            if z.norm() >= tau * peak {
                let p = self.grid.point(idx);
                for ax in 0..dim {
                    lower[ax] = lower[ax].min(p[ax]);
                    upper[ax] = upper[ax].max(p[ax]);
                    radius = radius.max(p[ax].abs());
                }
            }
        }
        SupportExtent { radius, lower, upper }
    }

    /// The support oracle `max |ξ_k|_∞` over `|F(ξ_k)| ≥ τ max|F|`.
    pub fn support_radius_sup_norm(&self, tau: f64) -> f64 {
        self.support_extent(tau).radius
    }
}

/// Default threshold of the support oracle.
pub const SUPPORT_TAU: f64 = 1e-8;

pub(crate) fn shell_and_global(grid: &GridSpec, samples: &[C64]) -> (f64, f64) {
    let mut shell: f64 = 0.0;
    let mut global: f64 = 0.0;
    for (idx, z) in samples.iter().enumerate() {
        let a = z.norm();
        global = global.max(a);
        if grid.in_shell(idx, 0.05) {
            shell = shell.max(a);
        }
    }
    (shell, global)
}

pub(crate) fn check_saturation(grid: &GridSpec, weighted: &[C64]) -> Result<()> {
    let (edge, peak) = shell_and_global(grid, weighted);
    if edge > SATURATION_GUARD * peak {
        return Err(Error::NyquistSaturation { edge, peak });
    }
    Ok(())
}
