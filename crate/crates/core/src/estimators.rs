//! Paley-Wiener radius estimators: growth sequences whose `n`-th roots converge
//! to the support radius of `f̂`, their extrapolation, the `PW_R^ω` seminorm
//! check, and the growth of `f` along the imaginary axis.

use std::f64::consts::PI;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::io::{fmt_f64, write_csv};
use crate::numeric::{LogMagnitude, LogSumExp};
use crate::signal::norms::log_mixed;
use crate::signal::{multi_indices, weighted_lp_norm, DiagnosticTable, GridSpec, SampledFunction, Spectrum, SUPPORT_TAU};
use crate::transforms::{stft, wigner, wigner_with, TimeFreqField, WignerRoute};
use crate::weights::WeightFunction;
use crate::{Error, Result, C64};

/// Fraction of `|ξ|^n|f̂|` mass allowed outside the detected support.
pub const NOISE_FLOOR: f64 = 1e-6;
/// Cells added around the detected support before measuring outside mass.
pub const SUPPORT_MARGIN_CELLS: f64 = 2.0;
/// Default order caps.
pub const DEFAULT_N_MAX_1D: u32 = 40;
pub const DEFAULT_N_MAX_2D: u32 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    DerivativeGrowth,
    WignerXiMoment,
    WignerXMoment,
    GaborMoment,
    PolyIterate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Truncation {
    Cap,
    NoiseFloor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MomentAxis {
    Xi,
    X,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceParams {
    pub p: f64,
    pub q: Option<f64>,
    pub lambda: f64,
    pub mu: Option<f64>,
    pub weight: String,
    pub window: Option<String>,
    pub symbol: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceEntry {
    pub n: u32,
    pub log_norm: LogMagnitude,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusSequence {
    pub method: Method,
    pub entries: Vec<SequenceEntry>,
    pub params: SequenceParams,
    pub n_used: u32,
    pub truncation: Truncation,
    /// The input was identically zero; the estimate is 0 by convention.
    pub zero_input: bool,
    /// Gabor only: `log ‖…‖ − N log(R_f̂ + R_ψ̂) − (d/2) log(N+1)` per entry.
    pub bound_excess: Option<Vec<f64>>,
}

impl RadiusSequence {
    pub fn new(method: Method, params: SequenceParams) -> Self {
        RadiusSequence {
            method,
            entries: Vec::new(),
            params,
            n_used: 0,
            truncation: Truncation::Cap,
            zero_input: false,
            bound_excess: None,
        }
    }

    /// Builds a sequence from `(n, log a)` pairs, as for synthetic inputs.
    pub fn from_logs(method: Method, params: SequenceParams, logs: &[(u32, f64)]) -> Result<Self> {
        let mut s = RadiusSequence::new(method, params);
        for w in logs.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::Data("sequence entries must be strictly increasing in n".into()));
            }
        }
        if logs.iter().any(|(_, l)| !l.is_finite()) {
            return Err(Error::Data("sequence entries must be finite".into()));
        }
        s.entries = logs.iter().map(|&(n, l)| SequenceEntry { n, log_norm: LogMagnitude(l) }).collect();
        s.n_used = logs.last().map(|e| e.0).unwrap_or(0);
        Ok(s)
    }

    /// `exp(log a_n / n)` for every entry with `n ≥ 1`.
    pub fn roots(&self) -> Vec<(u32, f64)> {
        self.entries.iter().filter(|e| e.n > 0).map(|e| (e.n, (e.log_norm.ln() / e.n as f64).exp())).collect()
    }

    /// `exp((log a_{n} − log a_{m}) / (n − m))` for consecutive entries, keyed by `n`.
    pub fn ratios(&self) -> Vec<(u32, f64)> {
        self.entries
            .windows(2)
            .map(|w| (w[1].n, ((w[1].log_norm.ln() - w[0].log_norm.ln()) / (w[1].n - w[0].n) as f64).exp()))
            .collect()
    }

    /// Keeps entries up to `n_used`, stopping early at the first non-finite value.
    pub(crate) fn push_all(&mut self, logs: Vec<(u32, f64)>, n_max: u32, n_used: u32) {
        for (n, l) in logs {
            if !l.is_finite() {
                break;
            }
            self.entries.push(SequenceEntry { n, log_norm: LogMagnitude(l) });
        }
        self.n_used = self.entries.last().map(|e| e.n).unwrap_or(0);
        self.truncation = if n_used < n_max { Truncation::NoiseFloor } else { Truncation::Cap };
    }

    /// CSV with columns `n, logNorm, root, ratio` (empty cells where undefined).
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let roots: std::collections::BTreeMap<u32, f64> = self.roots().into_iter().collect();
        let ratios: std::collections::BTreeMap<u32, f64> = self.ratios().into_iter().collect();
        let rows: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|e| {
                vec![
                    e.n.to_string(),
                    fmt_f64(e.log_norm.ln()),
                    roots.get(&e.n).map(|v| fmt_f64(*v)).unwrap_or_default(),
                    ratios.get(&e.n).map(|v| fmt_f64(*v)).unwrap_or_default(),
                ]
            })
            .collect();
        write_csv(path, &["n", "logNorm", "root", "ratio"], &rows)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate {
    pub method: Method,
    pub root_limit: f64,
    pub ratio_limit: f64,
    pub richardson: f64,
    pub oracle: Option<f64>,
    pub rel_err_root: Option<f64>,
    pub rel_err_ratio: Option<f64>,
    pub divergent: bool,
    pub n_used: u32,
    pub truncation: Truncation,
}

/// Minimum number of retained entries for [`extrapolate_limit`].
pub const MIN_ENTRIES: usize = 8;
/// Window and cumulative growth of the divergence flag.
pub const DIVERGENCE_WINDOW: usize = 10;
pub const DIVERGENCE_GROWTH: f64 = 0.05;

/// Root, ratio and Aitken estimates from the tail of a sequence.
///
/// Divergence is flagged when, over the last ten entries, both the roots and
/// the ratio estimates increase monotonically and the ratio estimates grow by
/// more than 5% in total. Ratios cancel the constant prefactor of `a_n`, so
/// the flag does not depend on the normalization of `f`.
pub fn extrapolate_limit(seq: &RadiusSequence, oracle: Option<f64>) -> Result<RadiusEstimate> {
    let rel = |v: f64| oracle.filter(|o| o.is_finite() && *o != 0.0).map(|o| (v - o).abs() / o);
    if seq.zero_input {
        return Ok(RadiusEstimate {
            method: seq.method,
            root_limit: 0.0,
            ratio_limit: 0.0,
            richardson: 0.0,
            oracle,
            rel_err_root: rel(0.0),
            rel_err_ratio: rel(0.0),
            divergent: false,
            n_used: 0,
            truncation: seq.truncation,
        });
    }
    let roots = seq.roots();
    let ratios = seq.ratios();
    if roots.len() < MIN_ENTRIES || ratios.is_empty() {
        return Err(Error::TooFewEntries { have: roots.len(), need: MIN_ENTRIES });
    }
    let root_limit = roots.last().unwrap().1;
    let ratio_limit = ratios.last().unwrap().1;
    let k = roots.len();
    let (r0, r1, r2) = (roots[k - 3].1, roots[k - 2].1, roots[k - 1].1);
    let denom = (r2 - r1) - (r1 - r0);
    let richardson = if denom.abs() > 1e-14 * r2.abs().max(1e-300) { r2 - (r2 - r1).powi(2) / denom } else { r2 };
    let divergent = {
        let tail_roots: Vec<f64> = roots.iter().rev().take(DIVERGENCE_WINDOW).rev().map(|r| r.1).collect();
        let tail_ratios: Vec<f64> = ratios.iter().rev().take(DIVERGENCE_WINDOW).rev().map(|r| r.1).collect();
        let mono = |v: &[f64]| v.len() >= 2 && v.windows(2).all(|w| w[1] > w[0]);
        mono(&tail_roots)
            && mono(&tail_ratios)
            && tail_ratios.last().unwrap() / tail_ratios[0] > 1.0 + DIVERGENCE_GROWTH
    };
    Ok(RadiusEstimate {
        method: seq.method,
        root_limit,
        ratio_limit,
        richardson,
        oracle,
        rel_err_root: rel(root_limit),
        rel_err_ratio: rel(ratio_limit),
        divergent,
        n_used: seq.n_used,
        truncation: seq.truncation,
    })
}

pub(crate) fn check_weight_use(w: &WeightFunction, lambda: f64) -> Result<()> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Parameter(format!("weight strength {lambda} must be a finite non-negative number")));
    }
    if lambda > 0.0 && !w.admissible_for_estimators() {
        return Err(Error::Unsupported(format!("weight {} is neither subadditive nor (bmm)", w.id())));
    }
    Ok(())
}

fn n_log(n: u32, v: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        n as f64 * v.ln()
    }
}

/// Largest `n ≤ n_max` such that for every `m ≤ n` the mass of
/// `e^{m·log_mult(ξ)}|F(ξ)|` outside the detected support (plus two cells)
/// is below [`NOISE_FLOOR`] of the total.
pub fn noise_floor_limit<M: Fn(&[f64]) -> f64 + Sync>(grid: &GridSpec, samples: &[C64], log_mult: M, n_max: u32) -> u32 {
    let spec = Spectrum { grid: *grid, samples: samples.to_vec(), convention_factor: grid.cell() };
    let ext = spec.support_extent(SUPPORT_TAU);
    if spec.max_abs() == 0.0 {
        return n_max;
    }
    let margin = SUPPORT_MARGIN_CELLS * grid.spacing();
    let dim = grid.dim;
    let inside = |p: &[f64; 2]| (0..dim).all(|ax| p[ax] >= ext.lower[ax] - margin && p[ax] <= ext.upper[ax] + margin);
    let pts: Vec<(bool, f64, f64)> = samples
        .iter()
        .enumerate()
        .filter(|(_, z)| z.norm() > 0.0)
        .map(|(i, z)| {
            let p = grid.point(i);
            (inside(&p), log_mult(&p[..dim]), z.norm().ln())
        })
        .collect();
    let ok = |n: u32| {
        let (mut inn, mut out) = (LogSumExp::new(), LogSumExp::new());
        for &(ins, lm, la) in &pts {
            let v = if n == 0 { la } else { n as f64 * lm + la };
            if ins {
                inn.push(v)
            } else {
                out.push(v)
            }
        }
        let mut tot = inn;
        tot.merge(&out);
        out.result() - tot.result() < NOISE_FLOOR.ln()
    };
    let mut used = 0;
    for n in 0..=n_max {
        if !ok(n) {
            break;
        }
        used = n;
    }
    used
}

fn log_sup_norm(p: &[f64]) -> f64 {
    p.iter().fold(0.0f64, |m, v| m.max(v.abs())).ln()
}

/// Order limit for sequences driven by `|ξ|^n f̂`: the cap for exact spectra,
/// the noise floor otherwise.
fn spectral_order_limit(f: &SampledFunction, n_max: u32) -> Result<u32> {
    if f.has_exact_spectrum() {
        return Ok(n_max);
    }
    let spec = f.forward_ft()?;
    Ok(noise_floor_limit(&spec.grid, &spec.samples, log_sup_norm, n_max))
}

/// `log max_{|α|=n} ‖e^{λω(x/(n+1))} D^α f‖_{L^p}` for `n = 0..n_max`.
pub fn derivative_growth_sequence(
    f: &SampledFunction,
    w: &WeightFunction,
    lambda: f64,
    p: f64,
    n_max: u32,
) -> Result<RadiusSequence> {
    check_weight_use(w, lambda)?;
    crate::numeric::check_exponent(p)?;
    let params = SequenceParams { p, q: None, lambda, mu: None, weight: w.id(), window: None, symbol: None };
    let mut seq = RadiusSequence::new(Method::DerivativeGrowth, params);
    f.check_finite()?;
    if f.is_zero() {
        seq.zero_input = true;
        return Ok(seq);
    }
    let n_used = spectral_order_limit(f, n_max)?;
    let dim = f.grid.dim;
    let logs = (0..=n_used)
        .into_par_iter()
        .map(|n| {
            let mut best = f64::NEG_INFINITY;
            for alpha in multi_indices(dim, n) {
                let d = f.spectral_derivative(&alpha)?;
                best = best.max(weighted_lp_norm(&d, p, w, lambda, n)?.ln());
            }
            Ok((n, best))
        })
        .collect::<Result<Vec<_>>>()?;
    seq.push_all(logs, n_max, n_used);
    Ok(seq)
}

/// Moment sequence of a precomputed field:
/// `log ‖e^{λω(x/(N+1)) + μω(ξ)} m_N F‖_{L^{p,q}}` with `m_N = |ξ|^N` or `|x|^N`.
#[allow(clippy::too_many_arguments)]
pub fn field_moment_logs(
    field: &TimeFreqField,
    axis: MomentAxis,
    w: &WeightFunction,
    lambda: f64,
    mu: f64,
    p: f64,
    q: f64,
    n_max: u32,
) -> Result<Vec<(u32, f64)>> {
    check_weight_use(w, lambda)?;
    check_weight_use(w, mu)?;
    let logs = field.log_magnitudes()?;
    let xs = field.x_grid.coords();
    let xis = field.xi_grid.coords();
    (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let s = 1.0 / (n as f64 + 1.0);
            let xw: Vec<f64> = xs
                .iter()
                .map(|x| {
                    let base = if lambda > 0.0 { lambda * w.eval_unchecked(x.abs() * s) } else { 0.0 };
                    if axis == MomentAxis::X {
                        base + n_log(n, x.abs())
                    } else {
                        base
                    }
                })
                .collect();
            let kw: Vec<f64> = xis
                .iter()
                .map(|k| {
                    let base = if mu > 0.0 { mu * w.eval_unchecked(k.abs()) } else { 0.0 };
                    if axis == MomentAxis::Xi {
                        base + n_log(n, k.abs())
                    } else {
                        base
                    }
                })
                .collect();
            let v = log_mixed(&logs, xs.len(), xis.len(), &xw, &kw, p, q, field.x_grid.spacing(), field.xi_grid.spacing())?;
            Ok((n, v.ln()))
        })
        .collect()
}

/// The Wigner field used by [`wigner_moment_sequence`] for the given axis: the
/// spectral-interpolation route for `ξ` moments and the sample-pair route
/// (exact `x`-support) for `x` moments.
pub fn wigner_field_for(f: &SampledFunction, axis: MomentAxis) -> Result<TimeFreqField> {
    match axis {
        MomentAxis::Xi => wigner(f, f),
        MomentAxis::X => wigner_with(f, f, WignerRoute::SamplePairs),
    }
}

/// Wigner moment sequence computed from a cached field of `f`.
#[allow(clippy::too_many_arguments)]
pub fn wigner_moment_sequence_from_field(
    f: &SampledFunction,
    field: &TimeFreqField,
    axis: MomentAxis,
    w: &WeightFunction,
    lambda: f64,
    mu: f64,
    p: f64,
    q: f64,
    n_max: u32,
) -> Result<RadiusSequence> {
    let method = if axis == MomentAxis::Xi { Method::WignerXiMoment } else { Method::WignerXMoment };
    let params = SequenceParams { p, q: Some(q), lambda, mu: Some(mu), weight: w.id(), window: None, symbol: None };
    let mut seq = RadiusSequence::new(method, params);
    if f.is_zero() {
        seq.zero_input = true;
        return Ok(seq);
    }
    let n_used = match axis {
        MomentAxis::Xi => spectral_order_limit(f, n_max)?,
        MomentAxis::X => noise_floor_limit(&f.grid, f.samples(), log_sup_norm, n_max),
    };
    let logs = field_moment_logs(field, axis, w, lambda, mu, p, q, n_used)?;
    seq.push_all(logs, n_max, n_used);
    Ok(seq)
}

/// `log ‖e^{λω(x/(N+1)) + μω(ξ)} |ξ|^N Wig f‖_{L^{p,q}}` (axis `Xi`) or the `|x|^N` variant.
#[allow(clippy::too_many_arguments)]
pub fn wigner_moment_sequence(
    f: &SampledFunction,
    axis: MomentAxis,
    w: &WeightFunction,
    lambda: f64,
    mu: f64,
    p: f64,
    q: f64,
    n_max: u32,
) -> Result<RadiusSequence> {
    let field = wigner_field_for(f, axis)?;
    wigner_moment_sequence_from_field(f, &field, axis, w, lambda, mu, p, q, n_max)
}

/// `log ‖e^{λω(x/(N+1)) + μω(ξ)} |ξ|^N V_ψ f‖_{L^{p,q}}`, with the upper-bound
/// profile `(R_f̂ + R_ψ̂)^{−N} (N+1)^{−d/2}` recorded alongside.
#[allow(clippy::too_many_arguments)]
pub fn gabor_moment_sequence(
    f: &SampledFunction,
    window: &SampledFunction,
    w: &WeightFunction,
    lambda: f64,
    mu: f64,
    p: f64,
    q: f64,
    n_max: u32,
) -> Result<RadiusSequence> {
    let params = SequenceParams { p, q: Some(q), lambda, mu: Some(mu), weight: w.id(), window: Some("window".into()), symbol: None };
    let mut seq = RadiusSequence::new(Method::GaborMoment, params);
    if f.is_zero() || window.is_zero() {
        seq.zero_input = true;
        return Ok(seq);
    }
    let field = stft(f, window)?;
    let n_used = spectral_order_limit(f, n_max)?.min(spectral_order_limit(window, n_max)?);
    let logs = field_moment_logs(&field, MomentAxis::Xi, w, lambda, mu, p, q, n_used)?;
    seq.push_all(logs, n_max, n_used);
    let rf = f.forward_ft()?.support_radius_sup_norm(SUPPORT_TAU);
    let rg = window.forward_ft()?.support_radius_sup_norm(SUPPORT_TAU);
    let half_d = f.grid.dim as f64 / 2.0;
    seq.bound_excess = Some(
        seq.entries
            .iter()
            .map(|e| e.log_norm.ln() - n_log(e.n, rf + rg) - half_d * (e.n as f64 + 1.0).ln())
            .collect(),
    );
    Ok(seq)
}

/// `PW_R^ω` profile: per `λ` and order `k ≤ alpha_cap`, the value
/// `max_{|α|=k} sup_x R^{−k} e^{λω(x/(k+1))} |D^α f(x)|` and its running sup,
/// both as logarithms (`−∞` for `f ≡ 0`).
pub fn pw_seminorm_check(
    f: &SampledFunction,
    radius: f64,
    w: &WeightFunction,
    lambdas: &[f64],
    alpha_cap: u32,
) -> Result<DiagnosticTable> {
    if !(radius > 0.0) {
        return Err(Error::Parameter(format!("radius {radius} must be positive")));
    }
    for &l in lambdas {
        check_weight_use(w, l)?;
    }
    let mut table = DiagnosticTable::new("pw_seminorm", &["lambda", "order", "log_value", "log_running_sup"]);
    let dim = f.grid.dim;
    let derivs: Vec<Vec<SampledFunction>> = if f.is_zero() {
        Vec::new()
    } else {
        (0..=alpha_cap)
            .into_par_iter()
            .map(|k| multi_indices(dim, k).iter().map(|a| f.spectral_derivative(a)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?
    };
    for &lambda in lambdas {
        let mut running = f64::NEG_INFINITY;
        for k in 0..=alpha_cap {
            let v = if f.is_zero() {
                f64::NEG_INFINITY
            } else {
                let best = derivs[k as usize]
                    .iter()
                    .map(|d| weighted_lp_norm(d, f64::INFINITY, w, lambda, k).map(|l| l.ln()))
                    .collect::<Result<Vec<f64>>>()?
                    .into_iter()
                    .fold(f64::NEG_INFINITY, f64::max);
                best - k as f64 * radius.ln()
            };
            running = running.max(v);
            table.rows.push(vec![lambda, k as f64, v, running]);
        }
    }
    Ok(table)
}

/// `log(last running sup / first value)` of the rows of one `λ` in a PW profile.
pub fn pw_profile_growth(table: &DiagnosticTable, lambda: f64) -> Option<f64> {
    let rows = table.filter("lambda", lambda);
    let first = rows.first()?[2];
    let last = rows.last()?[3];
    Some(last - first)
}

/// `log |f(iy)|` for `f = F^{-1}[F]`, by log-domain quadrature over `{|F| ≥ τ max|F|}`.
pub fn log_abs_on_imaginary_axis(spec: &Spectrum, y: &[f64]) -> Result<f64> {
    let g = spec.grid;
    if y.len() != g.dim {
        return Err(Error::Parameter("evaluation point dimension differs from grid".into()));
    }
    let peak = spec.max_abs();
    if peak == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let terms: Vec<(f64, C64)> = spec
        .samples
        .iter()
        .enumerate()
        .filter(|(_, z)| z.norm() >= SUPPORT_TAU * peak)
        .map(|(i, z)| {
            let p = g.point(i);
            let e: f64 = (0..g.dim).map(|ax| -y[ax] * p[ax]).sum();
            (e + z.norm().ln(), z / z.norm())
        })
        .collect();
    let m = terms.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
    let s: C64 = terms.iter().map(|(l, ph)| ph * (l - m).exp()).sum();
    let log_norm = (g.cell() / (2.0 * PI).powi(g.dim as i32)).ln();
    Ok(s.norm().ln() + m + log_norm)
}

/// `log|f(iy)| − H_R(y) + kω(|y|)` with `H_R(y) = R Σ|y_j|`, per `k` and `y`.
pub fn analytic_growth_check(
    spec: &Spectrum,
    radius: f64,
    w: &WeightFunction,
    k_list: &[f64],
    y_list: &[Vec<f64>],
) -> Result<DiagnosticTable> {
    let support = spec.support_radius_sup_norm(SUPPORT_TAU);
    if support > radius * (1.0 + 1e-12) {
        return Err(Error::SupportExceedsRadius { support, radius });
    }
    let dim = spec.grid.dim;
    let mut cols = vec!["k"];
    cols.extend(["y1", "y2"].iter().take(dim));
    cols.extend(["log_abs_f", "h_r", "value"]);
    let mut table = DiagnosticTable::new("analytic_growth", &cols);
    let logs = y_list.par_iter().map(|y| log_abs_on_imaginary_axis(spec, y)).collect::<Result<Vec<f64>>>()?;
    for &k in k_list {
        for (y, &lf) in y_list.iter().zip(&logs) {
            let h = radius * y.iter().map(|v| v.abs()).sum::<f64>();
            let om = w.eval_vec(y)?;
            let mut row = vec![k];
            row.extend(y.iter().copied());
            row.extend([lf, h, lf - h + k * om]);
            table.rows.push(row);
        }
    }
    Ok(table)
}

/// Least-squares slope of `log|f(iy)|` against `y` along one axis direction.
pub fn imaginary_axis_slope(spec: &Spectrum, ys: &[f64]) -> Result<f64> {
    let pts = ys
        .iter()
        .map(|&y| {
            let mut v = vec![0.0; spec.grid.dim];
            v[0] = y;
            log_abs_on_imaginary_axis(spec, &v).map(|l| (y, l))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// `f(0)` from the spectrum directly, `(2π)^{-d} Σ F dξ^d`.
pub fn value_at_origin(spec: &Spectrum) -> C64 {
    let s: C64 = spec.samples.iter().sum();
    s * (spec.grid.cell() / (2.0 * PI).powi(spec.grid.dim as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{hermite_function, make_bandlimited, DEFAULT_KAPPA};

    fn params() -> SequenceParams {
        SequenceParams { p: 2.0, q: None, lambda: 0.0, mu: None, weight: "log".into(), window: None, symbol: None }
    }

    #[test]
    fn geometric_sequence_is_exact() {
        let logs: Vec<(u32, f64)> = (0..=40).map(|n| (n, n as f64 * 2f64.ln())).collect();
        let s = RadiusSequence::from_logs(Method::DerivativeGrowth, params(), &logs).unwrap();
        let e = extrapolate_limit(&s, Some(2.0)).unwrap();
        assert!((e.root_limit - 2.0).abs() < 1e-12);
        assert!((e.ratio_limit - 2.0).abs() < 1e-12);
        assert!((e.richardson - 2.0).abs() < 1e-12);
        assert!(!e.divergent);
    }

    #[test]
    fn ratio_kills_polynomial_prefactor() {
        let logs: Vec<(u32, f64)> = (0..=40).map(|n| (n, n as f64 * 2f64.ln() + (n as f64 + 1.0).ln())).collect();
        let s = RadiusSequence::from_logs(Method::DerivativeGrowth, params(), &logs).unwrap();
        let e = extrapolate_limit(&s, Some(2.0)).unwrap();
        assert!((e.root_limit - 2.0 * 41f64.powf(1.0 / 40.0)).abs() < 1e-12);
        assert!((e.root_limit - 2.19).abs() < 0.01);
        // the last consecutive ratio keeps the factor (41/40)
        assert!((e.ratio_limit - 2.0 * 41.0 / 40.0).abs() < 1e-12);
        assert!(e.rel_err_ratio.unwrap() < e.rel_err_root.unwrap() / 3.0);
    }

    #[test]
    fn too_few_entries() {
        let logs: Vec<(u32, f64)> = (0..5).map(|n| (n, n as f64)).collect();
        let s = RadiusSequence::from_logs(Method::DerivativeGrowth, params(), &logs).unwrap();
        assert!(matches!(extrapolate_limit(&s, None), Err(Error::TooFewEntries { .. })));
    }

    #[test]
    fn zero_function_gives_zero_estimate() {
        let f = SampledFunction::zeros(GridSpec::default_1d());
        let s = derivative_growth_sequence(&f, &WeightFunction::log(), 0.0, 2.0, 40).unwrap();
        assert!(s.entries.is_empty());
        let e = extrapolate_limit(&s, Some(0.0)).unwrap();
        assert_eq!(e.root_limit, 0.0);
        let t = pw_seminorm_check(&f, 1.0, &WeightFunction::log(), &[0.0], 4).unwrap();
        assert!(t.rows.iter().all(|r| r[2] == f64::NEG_INFINITY));
    }

    #[test]
    fn hermite_sequence_diverges() {
        let f = hermite_function(3, GridSpec::default_1d()).unwrap();
        let s = derivative_growth_sequence(&f, &WeightFunction::log(), 0.0, 2.0, 40).unwrap();
        assert_eq!(s.n_used, 40);
        assert!(extrapolate_limit(&s, None).unwrap().divergent);
    }

    #[test]
    fn bandlimited_sequence_converges_without_divergence_flag() {
        let e = make_bandlimited(GridSpec::default_1d(), &[-1.0], &[1.0], DEFAULT_KAPPA).unwrap();
        let s = derivative_growth_sequence(&e.function, &WeightFunction::log(), 0.0, 2.0, 40).unwrap();
        let oracle = e.function.forward_ft().unwrap().support_radius_sup_norm(SUPPORT_TAU);
        let est = extrapolate_limit(&s, Some(oracle)).unwrap();
        assert!(!est.divergent);
        assert!(est.rel_err_ratio.unwrap() < 0.02, "{est:?}");
    }

    #[test]
    fn unsupported_weight_strength_is_rejected() {
        let mut w = WeightFunction::log();
        w.subadditive = false;
        let f = SampledFunction::zeros(GridSpec::default_1d());
        assert!(matches!(derivative_growth_sequence(&f, &w, 1.0, 2.0, 10), Err(Error::Unsupported(_))));
        assert!(derivative_growth_sequence(&f, &w, 0.0, 2.0, 10).is_ok());
    }

    #[test]
    fn origin_value_matches_inverse_transform() {
        let e = make_bandlimited(GridSpec::default_1d(), &[-1.0], &[1.0], DEFAULT_KAPPA).unwrap();
        let spec = e.function.forward_ft().unwrap();
        let g = e.function.grid;
        let j0 = g.points / 2;
        assert_eq!(g.coord(j0), 0.0);
        let direct = e.function.samples()[j0];
        assert!((value_at_origin(&spec) - direct).norm() < 1e-12 * direct.norm());
        let l0 = log_abs_on_imaginary_axis(&spec, &[0.0]).unwrap();
        assert!((l0 - direct.norm().ln()).abs() < 1e-12);
    }
}
