//! Weighted `L^p` and mixed `L^{p,q}` norms accumulated in the log domain.

use super::function::SampledFunction;
use crate::numeric::{check_exponent, log_lp, LogMagnitude, LogSumExp};
use crate::transforms::TimeFreqField;
use crate::weights::WeightFunction;
use crate::{Error, Result};

/// `log ‖e^{λω(x/(n+1))} f‖_{L^p}` (Riemann sum, cell `Δ^d`).
pub fn weighted_lp_norm(
    f: &SampledFunction,
    p: f64,
    w: &WeightFunction,
    lambda: f64,
    shrink: u32,
) -> Result<LogMagnitude> {
    if lambda < 0.0 {
        return Err(Error::Parameter(format!("λ = {lambda} must be non-negative")));
    }
    let s = 1.0 / (shrink as f64 + 1.0);
    weighted_lp_norm_with(f, p, |r| if lambda == 0.0 { 0.0 } else { lambda * w.eval_unchecked(r * s) })
}

/// `log ‖e^{g(|x|)} f‖_{L^p}` for an arbitrary log-weight `g` of the Euclidean norm.
pub fn weighted_lp_norm_with<G: Fn(f64) -> f64>(f: &SampledFunction, p: f64, g: G) -> Result<LogMagnitude> {
    check_exponent(p)?;
    f.check_finite()?;
    let grid = f.grid;
    let logs = f.samples().iter().enumerate().map(|(i, z)| {
        let a = z.norm();
        if a == 0.0 {
            f64::NEG_INFINITY
        } else {
            a.ln() + g(grid.norms_at(i).0)
        }
    });
    Ok(LogMagnitude(log_lp(logs, p, grid.cell().ln())))
}

/// Weight on the `x` side of a mixed norm: `(ω, λ, n)` for `e^{λω(x/(n+1))}`.
#[derive(Clone, Copy, Debug)]
pub struct XWeight<'a> {
    pub weight: &'a WeightFunction,
    pub lambda: f64,
    pub shrink: u32,
}

/// Weight on the `ξ` side of a mixed norm: `(ω, μ)` for `e^{μω(ξ)}`.
#[derive(Clone, Copy, Debug)]
pub struct XiWeight<'a> {
    pub weight: &'a WeightFunction,
    pub mu: f64,
}

/// `log (∫(∫|e^{…}F(x,ξ)|^p dx)^{q/p} dξ)^{1/q}` with `∞` meaning a max.
pub fn mixed_lpq_norm(
    field: &TimeFreqField,
    p: f64,
    q: f64,
    x_weight: Option<XWeight<'_>>,
    xi_weight: Option<XiWeight<'_>>,
) -> Result<LogMagnitude> {
    let logs = field.log_magnitudes()?;
    let xs = field.x_grid.coords();
    let xis = field.xi_grid.coords();
    let xw: Vec<f64> = xs
        .iter()
        .map(|x| match x_weight {
            Some(w) if w.lambda > 0.0 => w.lambda * w.weight.eval_unchecked(x.abs() / (w.shrink as f64 + 1.0)),
            _ => 0.0,
        })
        .collect();
    let kw: Vec<f64> = xis
        .iter()
        .map(|k| match xi_weight {
            Some(w) if w.mu > 0.0 => w.mu * w.weight.eval_unchecked(k.abs()),
            _ => 0.0,
        })
        .collect();
    log_mixed(&logs, xs.len(), xis.len(), &xw, &kw, p, q, field.x_grid.spacing(), field.xi_grid.spacing())
}

/// Mixed norm of a field given as log-magnitudes in `x`-major layout, with
/// additive log-weights per `x` row and per `ξ` column.
#[allow(clippy::too_many_arguments)]
pub fn log_mixed(
    logs: &[f64],
    nx: usize,
    nxi: usize,
    x_logw: &[f64],
    xi_logw: &[f64],
    p: f64,
    q: f64,
    dx: f64,
    dxi: f64,
) -> Result<LogMagnitude> {
    check_exponent(p)?;
    check_exponent(q)?;
    let mut inner = vec![LogSumExp::new(); nxi];
    let mut inner_max = vec![f64::NEG_INFINITY; nxi];
    for ix in 0..nx {
        let row = &logs[ix * nxi..(ix + 1) * nxi];
        let wx = x_logw[ix];
        for k in 0..nxi {
            let l = row[k] + wx;
            if p.is_infinite() {
                inner_max[k] = inner_max[k].max(l);
            } else {
                inner[k].push(p * l);
            }
        }
    }
    let per_xi = (0..nxi).map(|k| {
        let v = if p.is_infinite() {
            inner_max[k]
        } else {
            let s = inner[k].result();
            if s == f64::NEG_INFINITY {
                s
            } else {
                (s + dx.ln()) / p
            }
        };
        v + xi_logw[k]
    });
    Ok(LogMagnitude(log_lp(per_xi, q, dxi.ln())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::GridSpec;
    use crate::C64;

    fn gaussian() -> SampledFunction {
        SampledFunction::from_real_fn(GridSpec::new(1, 20.0, 1024).unwrap(), |x| (-x[0] * x[0] / 2.0).exp())
    }

    #[test]
    fn zero_function_is_zero_marker() {
        let f = SampledFunction::zeros(GridSpec::new(1, 20.0, 256).unwrap());
        let v = weighted_lp_norm(&f, 2.0, &WeightFunction::log(), 0.0, 0).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn gaussian_l2_norm() {
        let v = weighted_lp_norm(&gaussian(), 2.0, &WeightFunction::log(), 0.0, 0).unwrap();
        assert!((v.ln() - std::f64::consts::PI.powf(0.25).ln()).abs() < 1e-12);
    }

    #[test]
    fn weighted_sup_norm_matches_dense_scan() {
        let v = weighted_lp_norm(&gaussian(), f64::INFINITY, &WeightFunction::log(), 1.0, 0).unwrap();
        // the maximizer of (1+x)e^{-x²/2} solves x² + x − 1 = 0
        let xs = (5f64.sqrt() - 1.0) / 2.0;
        let scan = (0..=200_000)
            .map(|i| {
                let x = i as f64 * 1e-5;
                (1.0 + x) * (-x * x / 2.0).exp()
            })
            .fold(0.0, f64::max);
        assert!((scan - (1.0 + xs) * (-xs * xs / 2.0).exp()).abs() < 1e-9);
        // grid spacing 40/1024 limits the discrete max to second order
        assert!((v.value() - scan).abs() < 1e-3 * scan, "{} vs {scan}", v.value());
        assert!(v.value() <= scan + 1e-12);
    }

    #[test]
    fn unweighted_l2_matches_sum_of_squares() {
        let f = gaussian();
        let direct = (f.samples().iter().map(|z| z.norm_sqr()).sum::<f64>() * f.grid.spacing()).sqrt();
        let v = weighted_lp_norm(&f, 2.0, &WeightFunction::log(), 0.0, 0).unwrap();
        assert!((v.value() - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn rejects_non_finite_samples() {
        let g = gaussian();
        let mut s = g.samples().to_vec();
        s[3] = C64::new(f64::NAN, 0.0);
        let f = SampledFunction::new(g.grid, s).unwrap();
        assert!(weighted_lp_norm(&f, 2.0, &WeightFunction::log(), 0.0, 0).is_err());
    }

    #[test]
    fn mixed_norm_separable_product() {
        let (nx, nk) = (64, 32);
        let (dx, dk) = (0.25, 0.5);
        let g: Vec<f64> = (0..nx).map(|i| (-(i as f64 * dx - 8.0).powi(2)).exp()).collect();
        let h: Vec<f64> = (0..nk).map(|k| (-(k as f64 * dk - 8.0).powi(2) / 4.0).exp()).collect();
        let logs: Vec<f64> = (0..nx).flat_map(|i| h.iter().map(|hk| (g[i] * hk).ln()).collect::<Vec<_>>()).collect();
        let v = log_mixed(&logs, nx, nk, &vec![0.0; nx], &vec![0.0; nk], 2.0, 2.0, dx, dk).unwrap();
        let ng = (g.iter().map(|a| a * a).sum::<f64>() * dx).sqrt();
        let nh = (h.iter().map(|a| a * a).sum::<f64>() * dk).sqrt();
        assert!((v.ln() - (ng * nh).ln()).abs() < 1e-12);
    }
}
