//! Reproducible test functions: smooth bumps in space or frequency, Gaussians,
//! Hermite functions, and the twisted-Laplacian eigenfunction check.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::signal::fft::fft_batch;
use crate::signal::{GridSpec, SampledFunction, Spectrum};
use crate::transforms::wigner_with;
use crate::transforms::WignerRoute;
use crate::{Error, Result, C64};

/// Largest Hermite index accepted by [`hermite_function`].
pub const HERMITE_CAP: usize = 60;

/// Default sharpness of frequency-side bumps.
pub const DEFAULT_KAPPA: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TestFunctionKind {
    BandlimitedBump,
    SpatialBump,
    PlateauBump,
    Gaussian,
    Hermite,
    Custom,
}

/// Declarative description of a corpus entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionSpec {
    pub kind: TestFunctionKind,
    /// Support box (outer box for the plateau bump), one interval per axis.
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Inner box of the plateau bump.
    pub inner: Option<(Vec<f64>, Vec<f64>)>,
    pub kappa: f64,
    pub hermite_k: usize,
    pub grid: GridSpec,
    /// Randomizes the phases of a band-limited spectrum when present.
    pub seed: Option<u64>,
    /// File path for `Custom`.
    pub path: Option<String>,
}

/// A generated function with its known spectral radius, when there is one.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub function: SampledFunction,
    pub radius: Option<f64>,
}

/// `exp(−κ/(1−t²))` on `|t| < 1`, zero elsewhere.
pub fn bump_profile(t: f64, kappa: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (-kappa / (1.0 - t * t)).exp()
    }
}

fn box_value(p: &[f64], lower: &[f64], upper: &[f64], kappa: f64) -> f64 {
    p.iter()
        .zip(lower.iter().zip(upper))
        .map(|(&x, (&a, &b))| bump_profile((2.0 * x - a - b) / (b - a), kappa))
        .product()
}

fn check_box(g: &GridSpec, lower: &[f64], upper: &[f64], kappa: f64) -> Result<()> {
    if lower.len() != g.dim || upper.len() != g.dim {
        return Err(Error::Parameter(format!("box of dimension {} on a {}-d grid", lower.len(), g.dim)));
    }
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::Parameter(format!("bump sharpness {kappa} must be positive")));
    }
    for (&a, &b) in lower.iter().zip(upper) {
        if !(a < b) {
            return Err(Error::Parameter(format!("empty interval [{a}, {b}]")));
        }
        if a < -g.half_width || b >= g.half_width {
            return Err(Error::Domain(format!("interval [{a}, {b}] leaves the grid domain [−{0}, {0})", g.half_width)));
        }
    }
    Ok(())
}

/// Product of rescaled cutoffs `exp(−κ/(1−t²))` over the axes of the box.
pub fn make_bump(grid: GridSpec, lower: &[f64], upper: &[f64], kappa: f64) -> Result<SampledFunction> {
    check_box(&grid, lower, upper, kappa)?;
    Ok(SampledFunction::from_real_fn(grid, |p| box_value(p, lower, upper, kappa)))
}

/// Smooth cutoff equal to 1 on `inner` and supported in `outer`, built per axis as
/// the discrete convolution of the indicator of the midway box with a
/// normalized bump of the margin width.
pub fn make_plateau_bump(
    grid: GridSpec,
    inner: (&[f64], &[f64]),
    outer: (&[f64], &[f64]),
    kappa: f64,
) -> Result<SampledFunction> {
    check_box(&grid, outer.0, outer.1, kappa)?;
    check_box(&grid, inner.0, inner.1, kappa)?;
    let n = grid.points;
    let h = grid.spacing();
    let mut axes = Vec::with_capacity(grid.dim);
    for ax in 0..grid.dim {
        let (a_in, b_in, a_out, b_out) = (inner.0[ax], inner.1[ax], outer.0[ax], outer.1[ax]);
        if !(a_out < a_in && b_in < b_out) {
            return Err(Error::Parameter("inner box must lie strictly inside the outer box".into()));
        }
        let margin = (a_in - a_out).min(b_out - b_in) / 2.0;
        if margin < 2.0 * h {
            return Err(Error::Parameter("plateau margin is below two grid cells".into()));
        }
        let (lo, hi) = (a_in - margin, b_in + margin);
        let mut chi: Vec<C64> = (0..n)
            .map(|j| {
                let x = grid.coord(j);
                Complex64::new(if x >= lo && x <= hi { 1.0 } else { 0.0 }, 0.0)
            })
            .collect();
        // mollifier centred at index 0 (wrapped), normalized by its discrete mass
        let mut rho: Vec<C64> = (0..n)
            .map(|j| {
                let s = if j < n / 2 { j as f64 } else { j as f64 - n as f64 } * h;
                Complex64::new(bump_profile(s / margin, kappa), 0.0)
            })
            .collect();
        let mass: f64 = rho.iter().map(|z| z.re).sum();
        rho.iter_mut().for_each(|z| *z /= mass);
        fft_batch(&mut chi, n, false);
        fft_batch(&mut rho, n, false);
        let mut conv: Vec<C64> = chi.iter().zip(&rho).map(|(a, b)| a * b).collect();
        fft_batch(&mut conv, n, true);
        axes.push(conv.iter().map(|z| z.re / n as f64).collect::<Vec<f64>>());
    }
    let samples = (0..grid.len())
        .map(|idx| {
            let [a, b] = grid.unflatten(idx);
            let v = if grid.dim == 1 { axes[0][a] } else { axes[0][a] * axes[1][b] };
            // the convolution is exactly zero outside the outer box; clear rounding residue
            let p = grid.point(idx);
            let inside = (0..grid.dim).all(|ax| p[ax] > outer.0[ax] && p[ax] < outer.1[ax]);
            Complex64::new(if inside { v } else { 0.0 }, 0.0)
        })
        .collect();
    SampledFunction::new(grid, samples)
}

/// `f = F^{-1}[bump on the spectral box]`; the spectrum is stored as exact.
pub fn make_bandlimited(grid: GridSpec, lower: &[f64], upper: &[f64], kappa: f64) -> Result<CorpusEntry> {
    make_bandlimited_with_phase(grid, lower, upper, kappa, None)
}

/// As [`make_bandlimited`], with the spectrum multiplied by seeded random phases.
pub fn make_bandlimited_with_phase(
    grid: GridSpec,
    lower: &[f64],
    upper: &[f64],
    kappa: f64,
    seed: Option<u64>,
) -> Result<CorpusEntry> {
    let fg = grid.frequency_grid();
    check_box(&fg, lower, upper, kappa)?;
    let mut spec = Spectrum::from_real_fn(fg, |p| box_value(p, lower, upper, kappa));
    if let Some(s) = seed {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        for z in spec.samples.iter_mut() {
            let th: f64 = rng.gen_range(0.0..2.0 * PI);
            *z *= Complex64::from_polar(1.0, th);
        }
    }
    let radius = lower.iter().chain(upper).fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(CorpusEntry { name: box_name("bandlimited", lower, upper, kappa), function: spec.inverse_ft(), radius: Some(radius) })
}

/// `e^{−|x|²/2}`.
pub fn gaussian(grid: GridSpec) -> SampledFunction {
    SampledFunction::from_real_fn(grid, |p| (-p.iter().map(|x| x * x).sum::<f64>() / 2.0).exp())
}

/// `e_0, …, e_k` at the points `xs` by the three-term recurrence.
pub fn hermite_values(k: usize, xs: &[f64]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(k + 1);
    let e0: Vec<f64> = xs.iter().map(|x| PI.powf(-0.25) * (-x * x / 2.0).exp()).collect();
    out.push(e0);
    for m in 0..k {
        let a = (2.0 / (m as f64 + 1.0)).sqrt();
        let b = (m as f64 / (m as f64 + 1.0)).sqrt();
        let next: Vec<f64> = xs
            .iter()
            .enumerate()
            .map(|(i, x)| a * x * out[m][i] - if m > 0 { b * out[m - 1][i] } else { 0.0 })
            .collect();
        out.push(next);
    }
    out
}

/// Hermite function `e_k` on a 1-d grid, with its exact spectrum `√(2π)(−i)^k e_k(ξ)`.
pub fn hermite_function(k: usize, grid: GridSpec) -> Result<SampledFunction> {
    if k > HERMITE_CAP {
        return Err(Error::Parameter(format!("Hermite index {k} above the cap {HERMITE_CAP}")));
    }
    if grid.dim != 1 {
        return Err(Error::Unsupported("Hermite functions are generated for d = 1".into()));
    }
    let ek = hermite_values(k, &grid.coords()).pop().unwrap();
    let fg = grid.frequency_grid();
    let spec_vals = hermite_values(k, &fg.coords()).pop().unwrap();
    let phase = [Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0)][k % 4];
    let spectrum = spec_vals.iter().map(|v| phase * (v * (2.0 * PI).sqrt())).collect();
    let f = SampledFunction::new(grid, ek.iter().map(|&v| Complex64::new(v, 0.0)).collect())?;
    f.check_decay()?;
    f.with_exact_spectrum(spectrum)
}

/// Grid on which the Wigner field has equal spacing in `x` and `ξ`.
pub fn twisted_laplacian_grid() -> GridSpec {
    let n = 256usize;
    GridSpec::new(1, (PI * n as f64 / 4.0).sqrt(), n).expect("valid grid")
}

/// `D = −i∂` along one axis of a row-major `rows × cols` array, spacing `h`.
fn axis_derivative(data: &[C64], rows: usize, cols: usize, along_rows: bool, h: f64) -> Vec<C64> {
    let m = if along_rows { cols } else { rows };
    let mult: Vec<f64> = (0..m)
        .map(|i| {
            let k = if i < m / 2 { i as f64 } else if i == m / 2 { 0.0 } else { i as f64 - m as f64 };
            2.0 * PI * k / (m as f64 * h)
        })
        .collect();
    let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
    let lines = if along_rows { rows } else { cols };
    for l in 0..lines {
        let idx = |i: usize| if along_rows { l * cols + i } else { i * cols + l };
        let mut buf: Vec<C64> = (0..m).map(|i| data[idx(i)]).collect();
        fft_batch(&mut buf, m, false);
        buf.iter_mut().zip(&mult).for_each(|(z, k)| *z *= k / m as f64);
        fft_batch(&mut buf, m, true);
        for i in 0..m {
            out[idx(i)] = buf[i];
        }
    }
    out
}

/// `‖L̂W − (2k+1)W‖₂ / ‖W‖₂` for `W = Wig(e_j, e_k)` and
/// `L̂ = (½D_ξ + x)² + (½D_x − ξ)²`, over the central half of the `x` window.
pub fn twisted_laplacian_residual(j: usize, k: usize, grid: GridSpec) -> Result<f64> {
    twisted_laplacian_residual_for(j, k, grid, 2.0 * k as f64 + 1.0)
}

/// As [`twisted_laplacian_residual`] against an arbitrary candidate eigenvalue.
pub fn twisted_laplacian_residual_for(j: usize, k: usize, grid: GridSpec, eigenvalue: f64) -> Result<f64> {
    if j > 5 || k > 5 {
        return Err(Error::Parameter("twisted Laplacian check supports j, k ≤ 5".into()));
    }
    let ej = hermite_function(j, grid)?;
    let ek = hermite_function(k, grid)?;
    let w = wigner_with(&ej, &ek, WignerRoute::Upsampled)?;
    let (rows, cols) = (w.nx(), w.nxi());
    let xs = w.x_grid.coords();
    let xis = w.xi_grid.coords();
    let (hx, hxi) = (w.x_grid.spacing(), w.xi_grid.spacing());
    let apply_a = |v: &[C64]| -> Vec<C64> {
        let d = axis_derivative(v, rows, cols, true, hxi);
        v.iter().enumerate().map(|(i, z)| d[i] * 0.5 + z * xs[i / cols]).collect()
    };
    let apply_b = |v: &[C64]| -> Vec<C64> {
        let d = axis_derivative(v, rows, cols, false, hx);
        v.iter().enumerate().map(|(i, z)| d[i] * 0.5 - z * xis[i % cols]).collect()
    };
    let a2 = apply_a(&apply_a(&w.samples));
    let b2 = apply_b(&apply_b(&w.samples));
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..w.samples.len() {
        if xs[i / cols].abs() >= 0.5 * w.x_grid.half_width {
            continue;
        }
        let r = a2[i] + b2[i] - w.samples[i] * eigenvalue;
        num += r.norm_sqr();
        den += w.samples[i].norm_sqr();
    }
    Ok((num / den).sqrt())
}

fn box_name(prefix: &str, lower: &[f64], upper: &[f64], kappa: f64) -> String {
    let parts: Vec<String> = lower.iter().zip(upper).map(|(a, b)| format!("[{a},{b}]")).collect();
    format!("{prefix}:{}:k{kappa}", parts.join("x"))
}

fn parse_interval(s: &str) -> Result<(f64, f64)> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Config(format!("interval `{s}` must look like [a,b]")))?;
    let mut it = inner.split(',');
    let num = |v: Option<&str>| -> Result<f64> {
        let v = v.ok_or_else(|| Error::Config(format!("interval `{s}` needs two endpoints")))?;
        v.trim().replace('−', "-").parse::<f64>().map_err(|_| Error::Config(format!("bad number `{v}` in `{s}`")))
    };
    let a = num(it.next())?;
    let b = num(it.next())?;
    if it.next().is_some() {
        return Err(Error::Config(format!("interval `{s}` has more than two endpoints")));
    }
    Ok((a, b))
}

fn parse_box(s: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for part in s.split(['x', '×']) {
        let (a, b) = parse_interval(part)?;
        lo.push(a);
        hi.push(b);
    }
    Ok((lo, hi))
}

impl TestFunctionSpec {
    /// Parses corpus names such as `bandlimited:[-1,1]`, `bandlimited:[-1,1]x[-0.5,0.5]:k0.1`,
    /// `bump:[-2,2]:k1`, `plateau:[-0.5,0.5]:[-1,1]`, `gaussian`, `hermite:3`, `file:path.bin`.
    /// Trailing `:k<κ>` sets the sharpness and `:s<seed>` randomizes spectral phases.
    /// When `grid` is absent the default grid of the box dimension is used.
    pub fn parse(name: &str, grid: Option<GridSpec>) -> Result<Self> {
        let mut parts = name.split(':');
        let head = parts.next().unwrap_or("").trim().to_ascii_lowercase();
        let rest: Vec<&str> = parts.collect();
        let mut boxes = Vec::new();
        let mut kappa = None;
        let mut seed = None;
        let mut index = None;
        for r in &rest {
            let r = r.trim();
            if r.starts_with('[') {
                boxes.push(parse_box(r)?);
            } else if let Some(v) = r.strip_prefix('k') {
                kappa = Some(v.parse::<f64>().map_err(|_| Error::Config(format!("bad sharpness `{r}`")))?);
            } else if let Some(v) = r.strip_prefix('s') {
                seed = Some(v.parse::<u64>().map_err(|_| Error::Config(format!("bad seed `{r}`")))?);
            } else if let Ok(v) = r.parse::<usize>() {
                index = Some(v);
            } else if head != "file" {
                return Err(Error::Config(format!("unrecognized field `{r}` in `{name}`")));
            }
        }
        let dim_of = |b: &(Vec<f64>, Vec<f64>)| b.0.len();
        let pick_grid = |dim: usize| -> Result<GridSpec> {
            match grid {
                Some(g) if g.dim != dim => Err(Error::Config(format!("`{name}` is {dim}-d but the grid is {}-d", g.dim))),
                Some(g) => Ok(g),
                None if dim == 1 => Ok(GridSpec::default_1d()),
                None if dim == 2 => Ok(GridSpec::default_2d()),
                None => Err(Error::Config(format!("`{name}` has dimension {dim}"))),
            }
        };
        let base = |kind, grid| TestFunctionSpec {
            kind,
            lower: vec![],
            upper: vec![],
            inner: None,
            kappa: kappa.unwrap_or(DEFAULT_KAPPA),
            hermite_k: 0,
            grid,
            seed,
            path: None,
        };
        let spec = match head.as_str() {
            "bandlimited" | "bump" => {
                let b = match boxes.as_slice() {
                    [b] => b.clone(),
                    _ => return Err(Error::Config(format!("`{name}` needs exactly one support box"))),
                };
                let kind = if head == "bump" { TestFunctionKind::SpatialBump } else { TestFunctionKind::BandlimitedBump };
                let mut s = base(kind, pick_grid(dim_of(&b))?);
                s.lower = b.0;
                s.upper = b.1;
                s
            }
            "plateau" => {
                let (inner, outer) = match boxes.as_slice() {
                    [i, o] => (i.clone(), o.clone()),
                    _ => return Err(Error::Config(format!("`{name}` needs an inner and an outer box"))),
                };
                let mut s = base(TestFunctionKind::PlateauBump, pick_grid(dim_of(&outer))?);
                s.lower = outer.0;
                s.upper = outer.1;
                s.inner = Some(inner);
                s
            }
            "gaussian" => base(TestFunctionKind::Gaussian, grid.unwrap_or_else(GridSpec::default_1d)),
            "hermite" => {
                let mut s = base(TestFunctionKind::Hermite, pick_grid(1)?);
                s.hermite_k = index.ok_or_else(|| Error::Config(format!("`{name}` needs an index, e.g. hermite:3")))?;
                s
            }
            "file" => {
                let path = name.splitn(2, ':').nth(1).unwrap_or("").to_string();
                if path.is_empty() {
                    return Err(Error::Config("`file:` needs a path".into()));
                }
                let mut s = base(TestFunctionKind::Custom, grid.unwrap_or_else(GridSpec::default_1d));
                s.path = Some(path);
                s
            }
            _ => return Err(Error::Config(format!("unknown corpus entry `{name}`"))),
        };
        Ok(spec)
    }

    /// Generates the function; every entry passes the boundary-decay guard
    /// (band-limited entries through their exact spectrum).
    pub fn generate(&self) -> Result<CorpusEntry> {
        match self.kind {
            TestFunctionKind::BandlimitedBump => {
                make_bandlimited_with_phase(self.grid, &self.lower, &self.upper, self.kappa, self.seed)
            }
            TestFunctionKind::SpatialBump => {
                let f = make_bump(self.grid, &self.lower, &self.upper, self.kappa)?;
                f.check_decay()?;
                Ok(CorpusEntry { name: box_name("bump", &self.lower, &self.upper, self.kappa), function: f, radius: None })
            }
            TestFunctionKind::PlateauBump => {
                let (il, iu) = self.inner.as_ref().ok_or_else(|| Error::Config("plateau bump needs an inner box".into()))?;
                let f = make_plateau_bump(self.grid, (il, iu), (&self.lower, &self.upper), self.kappa)?;
                f.check_decay()?;
                Ok(CorpusEntry { name: box_name("plateau", &self.lower, &self.upper, self.kappa), function: f, radius: None })
            }
            TestFunctionKind::Gaussian => {
                let f = gaussian(self.grid);
                f.check_decay()?;
                Ok(CorpusEntry { name: "gaussian".into(), function: f, radius: None })
            }
            TestFunctionKind::Hermite => Ok(CorpusEntry {
                name: format!("hermite:{}", self.hermite_k),
                function: hermite_function(self.hermite_k, self.grid)?,
                radius: Some(f64::INFINITY),
            }),
            TestFunctionKind::Custom => {
                let path = self.path.as_deref().ok_or_else(|| Error::Config("custom entry needs a path".into()))?;
                let f = crate::io::read_function(std::path::Path::new(path))?;
                Ok(CorpusEntry { name: format!("file:{path}"), function: f, radius: None })
            }
        }
    }
}
