//! Non-quasianalytic weight functions `ω`, grid certificates for the weight
//! axioms (α)–(δ), and the Young conjugate `φ*(s) = sup_{t≥0}(st − ω(e^t))`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    Log,
    Power,
}

/// `ω(t) = log(1+t)` or `ω(t) = t^a` with `0 < a < 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightFunction {
    pub kind: WeightKind,
    pub a_pow: Option<f64>,
    /// `(a, b)` with `ω(t) ≥ a + b log(1+t)`.
    pub gamma_constants: (f64, f64),
    /// `L` with `ω(2t) ≤ L(ω(t) + 1)`.
    pub alpha_constant: f64,
    pub subadditive: bool,
    pub satisfies_bmm: bool,
    /// `H` with `2ω(t) ≤ ω(Ht) + H`.
    pub bmm_h: Option<f64>,
}

impl WeightFunction {
    pub fn log() -> Self {
        WeightFunction {
            kind: WeightKind::Log,
            a_pow: None,
            gamma_constants: (0.0, 1.0),
            alpha_constant: 1.0,
            subadditive: true,
            satisfies_bmm: false,
            bmm_h: None,
        }
    }

    pub fn power(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::Parameter(format!("power weight exponent {a} outside (0,1)")));
        }
        let h = 2f64.powf(1.0 / a).max(2.0);
        Ok(WeightFunction {
            kind: WeightKind::Power,
            a_pow: Some(a),
            // log y ≤ y^a / (a e) and (1+t)^a ≤ 1 + t^a
            gamma_constants: (-1.0, a * std::f64::consts::E),
            alpha_constant: 2f64.powf(a),
            subadditive: true,
            satisfies_bmm: true,
            bmm_h: Some(h),
        })
    }

    /// Short identifier used in reports, e.g. `log` or `power(0.5)`.
    pub fn id(&self) -> String {
        match self.kind {
            WeightKind::Log => "log".to_string(),
            WeightKind::Power => format!("power({})", self.a_pow.unwrap_or(f64::NAN)),
        }
    }

    /// Weights usable with `λ > 0` in the estimators.
    pub fn admissible_for_estimators(&self) -> bool {
        self.subadditive || self.satisfies_bmm
    }

    /// `ω(t)` without the domain check, for hot loops over `t = |x| ≥ 0`.
    #[inline]
    pub fn eval_unchecked(&self, t: f64) -> f64 {
        match self.kind {
            WeightKind::Log => t.ln_1p(),
            WeightKind::Power => t.powf(self.a_pow.unwrap_or(0.5)),
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if t.is_nan() || t < 0.0 {
            return Err(Error::Domain(format!("weight argument {t} is negative")));
        }
        Ok(self.eval_unchecked(t))
    }

    /// `ω(|ζ|)` with the Euclidean norm.
    pub fn eval_vec(&self, zeta: &[f64]) -> Result<f64> {
        if zeta.iter().any(|z| !z.is_finite()) {
            return Err(Error::Domain("non-finite weight argument".into()));
        }
        let r = zeta.iter().map(|z| z * z).sum::<f64>().sqrt();
        Ok(self.eval_unchecked(r))
    }

    /// `φ(t) = ω(e^t)`.
    pub fn phi(&self, t: f64) -> f64 {
        match self.kind {
            WeightKind::Log => {
                if t > 30.0 {
                    t + (-t).exp().ln_1p()
                } else {
                    t.exp().ln_1p()
                }
            }
            WeightKind::Power => (self.a_pow.unwrap_or(0.5) * t).exp(),
        }
    }

    /// `φ*(σ) = sup_{t≥0}(σt − φ(t))`; `+∞` when the supremum diverges.
    pub fn young_conjugate(&self, sigma: f64) -> f64 {
        let g = |t: f64| sigma * t - self.phi(t);
        let mut lo = 0.0;
        let mut hi = 1.0;
        const CAP: f64 = 1.0e9;
        while (self.phi(hi) - self.phi(lo)) / (hi - lo) < sigma {
            if hi >= CAP {
                let gain = g(hi) - g(hi / 2.0);
                return if gain > 1e-10 * (1.0 + g(hi).abs()) { f64::INFINITY } else { g(hi) };
            }
            lo = hi;
            hi *= 2.0;
        }
        let lo = if lo > 0.0 { lo / 2.0 } else { 0.0 };
        let (_, v) = maximize_concave(g, lo, hi, 1e-12);
        v
    }

    /// `λ φ*(s/λ)`.
    pub fn scaled_young_conjugate(&self, lambda: f64, s: f64) -> Result<f64> {
        if !(lambda > 0.0) {
            return Err(Error::Parameter(format!("λ = {lambda} must be positive")));
        }
        if s.is_nan() || s < 0.0 {
            return Err(Error::Domain(format!("s = {s} must be non-negative")));
        }
        let v = self.young_conjugate(s / lambda);
        Ok(if v.is_infinite() { v } else { lambda * v })
    }
}

/// Golden-section maximization of a unimodal function on `[a, b]`.
/// Returns `(argmax, max)`; stops when the bracket is below `rel_tol` relative width.
pub fn maximize_concave<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, rel_tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..400 {
        if (b - a).abs() <= rel_tol * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let candidates = [(a, f(a)), (c, fc), (d, fd), (b, f(b))];
    candidates
        .into_iter()
        .fold((a, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
}

/// Tabulated `λφ*(s/λ)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct YoungConjugateTable {
    pub lambda: f64,
    pub samples: Vec<(f64, f64)>,
    pub source_weight: WeightFunction,
}

impl YoungConjugateTable {
    pub fn new(w: &WeightFunction, lambda: f64, s_values: &[f64]) -> Result<Self> {
        let samples = s_values
            .iter()
            .map(|&s| Ok((s, w.scaled_young_conjugate(lambda, s)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(YoungConjugateTable { lambda, samples, source_weight: w.clone() })
    }

    /// Discrete convexity and monotonicity of the value column (finite part).
    pub fn is_convex_nondecreasing(&self, tol: f64) -> bool {
        let fin: Vec<(f64, f64)> = self.samples.iter().copied().filter(|(_, v)| v.is_finite()).collect();
        let mono = fin.windows(2).all(|w| w[1].1 >= w[0].1 - tol * (1.0 + w[0].1.abs()));
        let convex = fin.windows(3).all(|w| {
            let s1 = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
            let s2 = (w[2].1 - w[1].1) / (w[2].0 - w[1].0);
            s2 >= s1 - tol * (1.0 + s1.abs())
        });
        mono && convex
    }
}

/// Per-axiom results of [`check_weight_conditions`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionReport {
    pub monotone: bool,
    pub alpha: bool,
    pub alpha_witness: f64,
    pub beta: bool,
    pub beta_integral: f64,
    pub gamma: bool,
    pub gamma_fit: (f64, f64),
    pub delta: bool,
    pub subadditive: bool,
    pub bmm: bool,
    pub bmm_h: Option<f64>,
}

impl ConditionReport {
    pub fn axioms_hold(&self) -> bool {
        self.monotone && self.alpha && self.beta && self.gamma && self.delta
    }
}

/// `0` followed by 600 log-spaced points on `[10^-3, 10^6]`.
pub fn default_condition_grid() -> Vec<f64> {
    let n = 600;
    let mut g = vec![0.0];
    g.extend((0..n).map(|i| 10f64.powf(-3.0 + 9.0 * i as f64 / (n - 1) as f64)));
    g
}

/// Grid certificates for (α)–(δ), subadditivity and (bmm).
pub fn check_weight_conditions(w: &WeightFunction, grid: &[f64]) -> Result<ConditionReport> {
    if grid.len() < 100 {
        return Err(Error::Parameter("condition grid needs at least 100 points".into()));
    }
    if grid.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::Parameter("condition grid must be strictly increasing".into()));
    }
    if grid[0] > 0.0 || *grid.last().unwrap() < 1e6 {
        return Err(Error::Parameter("condition grid must span [0, 1e6]".into()));
    }
    let om = |t: f64| w.eval_unchecked(t);
    let vals: Vec<f64> = grid.iter().map(|&t| om(t)).collect();

    let monotone = om(0.0) >= 0.0 && vals.windows(2).all(|p| p[1] >= p[0]);

    let alpha_witness = grid.iter().map(|&t| om(2.0 * t) / (om(t) + 1.0)).fold(1.0, f64::max);
    let alpha = alpha_witness.is_finite();

    let (beta_integral, beta) = beta_certificate(w);

    let tail: Vec<(f64, f64)> = grid.iter().copied().zip(vals.iter().copied()).filter(|(t, _)| *t >= 1.0).collect();
    let b = tail.iter().map(|(t, v)| v / t.ln_1p()).fold(f64::INFINITY, f64::min);
    let a = grid.iter().zip(&vals).map(|(t, v)| v - b * t.ln_1p()).fold(f64::INFINITY, f64::min);
    let gamma = b > 0.0 && b.is_finite() && a.is_finite();

    let pos: Vec<(f64, f64)> = grid.iter().copied().filter(|t| *t > 0.0).map(|t| (t.ln(), om(t))).collect();
    let delta = pos.windows(3).all(|p| {
        let s1 = (p[1].1 - p[0].1) / (p[1].0 - p[0].0);
        let s2 = (p[2].1 - p[1].1) / (p[2].0 - p[1].0);
        s2 >= s1 - 1e-9 * (1.0 + s1.abs())
    });

    let stride = (grid.len() / 200).max(1);
    let sub: Vec<f64> = grid.iter().copied().step_by(stride).collect();
    let subadditive = sub.iter().all(|&s| {
        sub.iter().all(|&t| om(s + t) <= om(s) + om(t) + 1e-12 * (1.0 + om(s + t)))
    });

    let candidates = [1.25, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 12.0, 16.0, 20.0, 25.0, 32.0, 50.0, 64.0, 100.0];
    let bmm_h = candidates.into_iter().find(|&h| {
        let slack: Vec<f64> = grid.iter().map(|&t| om(h * t) + h - 2.0 * om(t)).collect();
        let nonneg = slack.iter().all(|&s| s >= -1e-12);
        let mid = slack[slack.len() / 2];
        let last = *slack.last().unwrap();
        nonneg && last >= mid - 1e-9 * (1.0 + mid.abs())
    });

    Ok(ConditionReport {
        monotone,
        alpha,
        alpha_witness,
        beta,
        beta_integral,
        gamma,
        gamma_fit: (a, b),
        delta,
        subadditive,
        bmm: bmm_h.is_some(),
        bmm_h,
    })
}

/// `∫_1^∞ ω(t)/t² dt`: Simpson in `u = ln t` on `[1, 10^6]` plus a power-law tail.
fn beta_certificate(w: &WeightFunction) -> (f64, bool) {
    let upper = 1e6f64;
    let l = upper.ln();
    let n = 20_000usize;
    let h = l / n as f64;
    let f = |u: f64| w.eval_unchecked(u.exp()) * (-u).exp();
    let mut s = f(0.0) + f(l);
    for i in 1..n {
        s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    let body = s * h / 3.0;
    let eps = 1e-4;
    let slope = (w.eval_unchecked(upper * (1.0 + eps)).ln() - w.eval_unchecked(upper * (1.0 - eps)).ln())
        / ((1.0 + eps).ln() - (1.0 - eps).ln());
    if !(slope < 1.0) {
        return (f64::INFINITY, false);
    }
    let tail = w.eval_unchecked(upper) / ((1.0 - slope) * upper);
    let total = body + tail;
    (total, total.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_conjugate(w: &WeightFunction, sigma: f64, t_max: f64) -> f64 {
        let n = 2_000_000;
        (0..=n)
            .map(|i| {
                let t = t_max * i as f64 / n as f64;
                sigma * t - w.phi(t)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(WeightFunction::log().eval(0.0).unwrap(), 0.0);
        assert!((WeightFunction::power(0.5).unwrap().eval(4.0).unwrap() - 2.0).abs() < 1e-15);
        let v = WeightFunction::log().eval_vec(&[3.0, 4.0]).unwrap();
        assert!((v - 6f64.ln()).abs() < 1e-15);
        assert!(WeightFunction::log().eval(-1.0).is_err());
    }

    #[test]
    fn conjugate_at_zero_slope() {
        let p = WeightFunction::power(0.5).unwrap();
        assert!((p.scaled_young_conjugate(1.0, 0.0).unwrap() + 1.0).abs() < 1e-12);
        let l = WeightFunction::log();
        assert!((l.scaled_young_conjugate(1.0, 0.0).unwrap() + 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn power_half_conjugate_against_brute_force() {
        let p = WeightFunction::power(0.5).unwrap();
        // grid sup over t ∈ [0, 20] brackets the stationary point t = 2 log 4
        let bf = brute_force_conjugate(&p, 2.0, 20.0);
        let v = p.scaled_young_conjugate(1.0, 2.0).unwrap();
        assert!((v - bf).abs() < 1e-9, "{v} vs {bf}");
        assert!((v - 1.545_177_444_479_562).abs() < 1e-9);
        let v2 = p.scaled_young_conjugate(2.0, 2.0).unwrap();
        let bf2 = 2.0 * brute_force_conjugate(&p, 1.0, 20.0);
        assert!((v2 - bf2).abs() < 1e-9);
        assert!((v2 + 1.227_411_277_760_219).abs() < 1e-9);
    }

    #[test]
    fn log_conjugate_closed_form_and_divergence() {
        let l = WeightFunction::log();
        for s in [0.6, 0.75, 0.9, 0.99] {
            let exact = s * f64::ln(s) + (1.0 - s) * f64::ln(1.0 - s);
            assert!((l.young_conjugate(s) - exact).abs() < 1e-9);
        }
        assert!(l.young_conjugate(1.0).abs() < 1e-9);
        assert!(l.young_conjugate(1.5).is_infinite());
        assert!(l.young_conjugate(1.0 + 1e-6).is_infinite());
    }

    #[test]
    fn log_weight_certificates() {
        let r = check_weight_conditions(&WeightFunction::log(), &default_condition_grid()).unwrap();
        assert!(r.axioms_hold(), "{r:?}");
        assert!(r.subadditive);
        assert!(!r.bmm);
    }

    #[test]
    fn power_weight_certificates() {
        let r = check_weight_conditions(&WeightFunction::power(0.5).unwrap(), &default_condition_grid()).unwrap();
        assert!(r.axioms_hold(), "{r:?}");
        assert!(r.subadditive && r.bmm);
        assert_eq!(r.bmm_h, Some(4.0));
        assert!((r.beta_integral - 2.0).abs() < 1e-6, "{}", r.beta_integral);
    }

    #[test]
    fn near_critical_power_beta_integral() {
        let w = WeightFunction::power(0.999).unwrap();
        let r = check_weight_conditions(&w, &default_condition_grid()).unwrap();
        assert!(r.beta);
        assert!((r.beta_integral - 1000.0).abs() < 10.0, "{}", r.beta_integral);
    }

    #[test]
    fn condition_grid_is_validated() {
        let w = WeightFunction::log();
        assert!(check_weight_conditions(&w, &[0.0, 1.0, 2.0]).is_err());
        let mut g = default_condition_grid();
        g.swap(3, 4);
        assert!(check_weight_conditions(&w, &g).is_err());
    }

    #[test]
    fn table_is_convex() {
        let w = WeightFunction::power(0.5).unwrap();
        let s: Vec<f64> = (0..200).map(|i| i as f64 * 0.1).collect();
        let t = YoungConjugateTable::new(&w, 1.5, &s).unwrap();
        assert!(t.is_convex_nondecreasing(1e-8));
    }
}
